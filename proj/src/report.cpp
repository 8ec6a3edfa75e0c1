#include "learnlab/report.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace learnlab {

namespace fs = std::filesystem;

namespace {

std::string cell(std::string s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += "\\|";
        else if (c == '\n') out += ' ';
        else out += c;
    }
    return out;
}

std::string cell(const Json& v) {
    if (v.is_null()) return "-";
    if (v.is_string()) return cell(v.get<std::string>());
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    if (v.is_number_float()) return fmt::format("{:.6g}", v.get<double>());
    return cell(v.dump());
}

std::string row(std::initializer_list<std::string> cells) {
    std::string out = "|";
    for (const auto& c : cells) out += " " + c + " |";
    return out + "\n";
}

std::string header(std::initializer_list<std::string> cells) {
    std::string out = row(cells) + "|";
    for (std::size_t i = 0; i < cells.size(); ++i) out += "---|";
    return out + "\n";
}

std::string language_text(const Json& j) {
    if (!j.is_object()) return cell(j);
    const auto kind = j.value("kind", std::string("?"));
    if (kind == "threshold") return fmt::format("Threshold({})", j.at("min").get<std::uint64_t>());
    if (kind == "multiples") return fmt::format("Multiples({})", j.at("period").get<std::uint64_t>());
    if (kind == "cofinite") return fmt::format("CoFinite({})", j.at("excluded").dump());
    if (kind == "finite") {
        const auto& e = j.at("elements");
        if (e.size() > 12) return fmt::format("FiniteSet(|{}| elements)", e.size());
        return fmt::format("FiniteSet({})", e.dump());
    }
    if (kind == "all") return "All";
    return cell(j.dump());
}

const char* expected_pattern(int level) {
    switch (level) {
    case 0: return "accuracy stays at chance";
    case 1: return "no lock under reflexive labels; fixed-D control locks";
    case 2: return "thousands of flips before reliable discrimination";
    case 3: return "locks or generates without ever being confirmed";
    case 4: return "no invalid output reaches the stream";
    }
    return "";
}

Json read_json(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error(fmt::format("report: missing summary {}", p.string()));
    return Json::parse(f);
}

} // namespace

std::string render_report(const fs::path& dir, const Json& manifest) {
    std::string levels, risk, vc, pac, limit;
    for (const auto& b : manifest.at("blocks")) {
        const auto name = b.at("name").get<std::string>();
        const auto kind = b.at("kind").get<std::string>();
        const std::string src = "`" + name + "/summary.json`";
        const Json s = read_json(dir / name / "summary.json");

        if (kind == "levels") {
            for (const auto& l : s.at("levels")) {
                const int level = l.at("level").get<int>();
                levels += row({std::to_string(level), cell(l.at("feedback")), expected_pattern(level),
                               cell(l.at("observed")), cell(l.at("expectation_met")), src});
            }
        } else if (kind == "risk") {
            for (const auto& r : s.at("rows")) {
                std::string measured;
                if (r.at("defined").get<bool>()) {
                    measured = fmt::format("{:.6g}", r.at("value").get<double>());
                    if (!r.at("ci_halfwidth").is_null())
                        measured += fmt::format(" ± {:.3g}", r.at("ci_halfwidth").get<double>());
                } else {
                    measured = fmt::format("undefined: diverges on {} point(s)", r.at("diverging").size());
                }
                risk += row({cell(r.at("property")), cell(r.at("mechanism_class")), cell(r.at("risk_formula")),
                             cell(r.at("quantifiers")), cell(r.at("kind")), measured, src});
            }
        } else if (kind == "vc") {
            vc += row({cell(s.at("family")), cell(s.at("k")), cell(s.at("universe_size")), cell(s.at("cap")),
                       cell(s.at("vc")), cell(s.at("at_cap")), cell(s.at("witness")), src});
        } else if (kind == "pac") {
            for (const auto& d : s.at("per_distribution")) {
                pac += row({cell(s.at("hypothesis_class")), language_text(s.at("target")), cell(s.at("m")),
                            cell(d.at("distribution")), cell(d.at("failure_rate")), cell(d.at("ci_halfwidth")),
                            cell(s.at("delta")), src});
            }
            if (s.contains("scaling")) {
                const auto& sc = s.at("scaling");
                pac += row({cell(s.at("hypothesis_class")), language_text(s.at("target")), "scaling",
                            fmt::format("median m over eps {}: {}", sc.at("eps").dump(), sc.at("median_m").dump()),
                            fmt::format("slope {:.3f}", sc.at("loglog_slope").get<double>()), "-", "-", src});
            }
        } else {
            std::string outcome;
            if (kind == "limit-identify")
                outcome = fmt::format("converged-correct: {}", cell(s.at("converged_correct")));
            else if (kind == "limit-generate")
                outcome = fmt::format("clean from step {}; clean after N0: {}", cell(s.at("clean_from")),
                                      cell(s.at("window_clean")));
            else
                outcome = fmt::format("committed {}; learner defeated: {}", language_text(s.at("committed_target")),
                                      cell(s.at("learner_defeated")));
            const bool gen = kind == "limit-generate";
            limit += row({cell(name), cell(kind), cell(s.at("description")), gen ? "-" : cell(s.at("lock_step")),
                          gen ? "-" : cell(s.at("mind_changes")), outcome, src});
        }
    }

    std::ostringstream out;
    out << "# learnlab report\n\n";
    out << fmt::format("- seed: {}\n- config hash: `{}`\n- version: {}\n- rng: {}\n\n", manifest.at("seed").dump(),
                       manifest.at("config_hash").get<std::string>(), manifest.at("version").get<std::string>(),
                       manifest.at("rng").get<std::string>());

    if (!levels.empty()) {
        out << "## Feedback levels\n\n";
        out << header({"Level", "Feedback", "Expected pattern", "Observed", "Pattern seen", "Source"}) << levels << "\n";
    }
    if (!risk.empty()) {
        out << "## Unified risk template\n\n";
        out << header({"Property", "Mechanism class", "Risk functional", "Quantifiers", "Risk", "Measured", "Source"})
            << risk << "\n";
        out << "Generation and novelty values are finite-window proxies: 1 means a violation was observed between N0 "
               "and N1.\n\n";
    }
    out << "## Risk functionals by axis\n\n";
    out << "Static description, not a measurement.\n\n";
    out << header({"Risk", "Worst case or limit over", "Probabilistic", "Sequential"});
    out << row({"expr", "every instance (here: the evaluation universe)", "no", "no"});
    out << row({"comp", "every instance (here: the evaluation universe)", "no", "no"});
    out << row({"pac", "draws from the distribution D", "yes", "no"});
    out << row({"gen", "positions n of the enumeration (here: a window [N0, N1])", "no", "yes"});
    out << "\n";
    if (!vc.empty()) {
        out << "## VC dimension\n\n";
        out << header({"Family", "k", "Universe size", "Cap", "VC", "At cap", "Witness", "Source"}) << vc << "\n";
    }
    if (!pac.empty()) {
        out << "## PAC trials\n\n";
        out << header({"Class", "Target", "m", "Distribution", "Failure rate", "99% half-width", "delta", "Source"})
            << pac << "\n";
    }
    if (!limit.empty()) {
        out << "## Limit experiments\n\n";
        out << header({"Block", "Kind", "Run", "Lock step", "Mind changes", "Outcome", "Source"}) << limit << "\n";
    }
    return out.str();
}

std::string emit_report(const fs::path& dir) {
    const auto path = dir / "manifest.json";
    std::ifstream f(path, std::ios::binary);
    if (!f) throw MissingManifest(fmt::format("no manifest.json in {}", dir.string()));
    Json manifest;
    try {
        manifest = Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw MissingManifest(fmt::format("unreadable manifest in {}: {}", dir.string(), e.what()));
    }
    return render_report(dir, manifest);
}

} // namespace learnlab
