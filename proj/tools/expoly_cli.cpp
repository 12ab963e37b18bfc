// Command-line front end: verify solutions, classify them, run the
// clause-by-clause theorem checker, compute hulls and growth indicators,
// and drive the bundled corpus of case files.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "expoly/classifier.hpp"
#include "expoly/growth.hpp"
#include "expoly/hull.hpp"
#include "expoly/parser.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace expoly;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUndecided = 2;
constexpr int kExitParseError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CaseFile load_case(const std::string& path) {
    return parse_case_file(read_file(path));
}

std::string interval_str(const RealInterval& r) { return r.str(20); }

// everything the commands need for one case
struct CaseRun {
    bool residual_zero = false;
    ExPoly res;
    SolutionClass cls;
    std::optional<GrowthReport> growth;
    std::string growth_error;
    std::optional<ClauseReport> report;
    std::vector<std::string> mismatches;
};

CaseRun run_case(const CaseFile& cf, unsigned digits) {
    CaseRun r;
    r.res = residual(cf.eq, cf.f);
    r.residual_zero = r.res.is_zero();
    r.cls = classify(cf.f);
    try {
        r.growth = indicators(cf.f, digits);
    } catch (const Error& e) {
        r.growth_error = e.what();
    }
    if (r.residual_zero) r.report = check_theorem(cf.eq, cf.f, cf.params, digits);

    const Expectation& ex = cf.expect;
    if (ex.residual_zero && *ex.residual_zero != r.residual_zero)
        r.mismatches.push_back(std::string("residual expected ") +
                               (*ex.residual_zero ? "ZERO" : "NONZERO"));
    if (ex.cls && *ex.cls != r.cls.tag)
        r.mismatches.push_back(std::string("class expected ") + to_string(*ex.cls) +
                               ", got " + to_string(r.cls.tag));
    if (ex.rho && (!r.growth || r.growth->rho != *ex.rho))
        r.mismatches.push_back("rho expected " + std::to_string(*ex.rho));
    if (ex.lambda && (!r.growth || r.growth->lambda != *ex.lambda))
        r.mismatches.push_back("lambda expected " + std::to_string(*ex.lambda));
    for (const auto& [name, want] : ex.clauses) {
        const ClauseResult* got = r.report ? r.report->find(name) : nullptr;
        if (!got)
            r.mismatches.push_back("clause " + name + " not evaluated");
        else if (got->status != want)
            r.mismatches.push_back("clause " + name + " expected " +
                                   std::string(to_string(want)) + ", got " +
                                   to_string(got->status));
    }
    return r;
}

json clause_json(const ClauseReport& rep) {
    json arr = json::array();
    for (const auto& c : rep.clauses)
        arr.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"note", c.note}});
    return arr;
}

json growth_json(const GrowthReport& g) {
    json j;
    j["rho"] = g.rho;
    j["lambda"] = g.lambda;
    j["t_leading"] = interval_str(g.t_leading);
    j["n_leading"] = g.n_leading ? json(interval_str(*g.n_leading)) : json("MZERO");
    j["mean_type"] = g.mean_type;
    return j;
}

int cmd_verify(const std::string& path, unsigned digits, bool as_json) {
    CaseFile cf = load_case(path);
    CaseRun r = run_case(cf, digits);
    if (as_json) {
        json j{{"file", path},
               {"residual", r.residual_zero ? "ZERO" : r.res.str()}};
        std::cout << j.dump(2) << "\n";
    } else if (r.residual_zero) {
        std::cout << "residual = 0\n";
    } else {
        const auto& t = r.res.terms().front();
        std::cout << "residual != 0\nwitness term: "
                  << ExPoly::term(t.coeff, t.exponent).str() << "\n";
    }
    return r.residual_zero ? kExitOk : kExitMismatch;
}

int cmd_classify(const std::string& path, unsigned digits, bool as_json) {
    CaseFile cf = load_case(path);
    CaseRun r = run_case(cf, digits);
    if (as_json) {
        json members = json::array();
        for (auto m : r.cls.memberships) members.push_back(to_string(m));
        json j{{"file", path}, {"class", to_string(r.cls.tag)}, {"memberships", members}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "class = " << to_string(r.cls.tag) << "\nmemberships:";
        for (auto m : r.cls.memberships) std::cout << " " << to_string(m);
        std::cout << "\n";
        for (const auto& [p, al] : r.cls.exponentials)
            std::cout << "  term (" << p.str() << ") * exp(" << al.str() << ")\n";
        if (!r.cls.poly_part.is_zero())
            std::cout << "  polynomial part " << r.cls.poly_part.str() << "\n";
    }
    if (cf.expect.cls && *cf.expect.cls != r.cls.tag) return kExitMismatch;
    return kExitOk;
}

int cmd_growth(const std::string& path, unsigned digits, bool as_json) {
    CaseFile cf = load_case(path);
    GrowthReport g = indicators(cf.f, digits);
    if (as_json) {
        json j = growth_json(g);
        j["file"] = path;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "rho = " << g.rho << "\nlambda = " << g.lambda
                  << "\nT leading coefficient = " << interval_str(g.t_leading)
                  << "\nN leading coefficient = "
                  << (g.n_leading ? interval_str(*g.n_leading) : std::string("MZERO"))
                  << "\nmean type = " << (g.mean_type ? "yes" : "no") << "\n";
    }
    bool ok = (!cf.expect.rho || g.rho == *cf.expect.rho) &&
              (!cf.expect.lambda || g.lambda == *cf.expect.lambda);
    return ok ? kExitOk : kExitMismatch;
}

int cmd_theorem(const std::string& path, unsigned digits, bool as_json) {
    CaseFile cf = load_case(path);
    CaseRun r = run_case(cf, digits);
    if (!r.report) {
        std::cerr << "error: f is not a solution; residual = " << r.res.str() << "\n";
        return kExitMismatch;
    }
    if (as_json) {
        json j{{"file", path}, {"clauses", clause_json(*r.report)}};
        if (!r.mismatches.empty()) j["mismatches"] = r.mismatches;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& c : r.report->clauses) {
            std::cout << "(" << c.name << ") " << to_string(c.status);
            if (!c.note.empty()) std::cout << "  -- " << c.note;
            std::cout << "\n";
        }
        for (const auto& m : r.mismatches) std::cout << "MISMATCH: " << m << "\n";
    }
    return r.mismatches.empty() ? kExitOk : kExitMismatch;
}

int cmd_hull(const std::string& points, unsigned digits, bool as_json) {
    FrequencySet S(parse_point_list(points), digits);
    HullResult h = convex_hull(S, /*adjoin_origin=*/false, digits);
    if (as_json) {
        json verts = json::array();
        for (const auto& v : h.vertices) verts.push_back(v.str());
        json j{{"kind", to_string(h.kind)},
               {"vertices", verts},
               {"circumference", interval_str(h.circumference)}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << to_string(h.kind) << "\nvertices:";
        for (const auto& v : h.vertices) std::cout << " (" << v.str() << ")";
        std::cout << "\nC = " << interval_str(h.circumference) << "\n";
    }
    return kExitOk;
}

int cmd_corpus(const std::string& dir, unsigned digits, bool as_json) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".case") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "error: no .case files in '" << dir << "'\n";
        return kExitMismatch;
    }
    bool all_ok = true;
    json arr = json::array();
    for (const auto& p : files) {
        CaseFile cf = load_case(p.string());
        CaseRun r = run_case(cf, digits);
        bool ok = r.mismatches.empty();
        all_ok = all_ok && ok;
        if (as_json) {
            json j{{"file", p.filename().string()},
                   {"ok", ok},
                   {"residual", r.residual_zero ? "ZERO" : "NONZERO"},
                   {"class", to_string(r.cls.tag)}};
            if (r.report) j["clauses"] = clause_json(*r.report);
            if (r.growth) j["growth"] = growth_json(*r.growth);
            if (!ok) j["mismatches"] = r.mismatches;
            arr.push_back(std::move(j));
        } else {
            std::cout << p.filename().string() << ": " << (ok ? "OK" : "FAIL") << "\n";
            for (const auto& m : r.mismatches) std::cout << "    " << m << "\n";
        }
    }
    if (as_json) std::cout << arr.dump(2) << "\n";
    return all_ok ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symbolic verification of exponential-polynomial solutions "
                 "of non-linear delay-differential equations"};
    app.require_subcommand(1);

    unsigned digits = 50;
    bool as_json = false;
    app.add_option("--precision", digits, "working precision in decimal digits")
        ->capture_default_str()
        ->check(CLI::Range(16u, 100000u));
    app.add_flag("--json", as_json, "machine-readable output");

    std::string case_path, points, corpus_dir = "corpus";
    auto* verify = app.add_subcommand("verify", "verify that f solves the equation");
    verify->add_option("case", case_path, "case file")->required();
    auto* classify_cmd = app.add_subcommand("classify", "structural solution class");
    classify_cmd->add_option("case", case_path, "case file")->required();
    auto* theorem = app.add_subcommand("theorem", "clause-by-clause theorem report");
    theorem->add_option("case", case_path, "case file")->required();
    auto* growth = app.add_subcommand("growth", "growth indicators of f");
    growth->add_option("case", case_path, "case file")->required();
    auto* hull = app.add_subcommand("hull", "convex hull of a finite point set");
    hull->add_option("points", points, "comma-separated complex constants")->required();
    auto* corpus = app.add_subcommand("corpus", "run all bundled case files");
    corpus->add_option("dir", corpus_dir, "corpus directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) return cmd_verify(case_path, digits, as_json);
        if (*classify_cmd) return cmd_classify(case_path, digits, as_json);
        if (*theorem) return cmd_theorem(case_path, digits, as_json);
        if (*growth) return cmd_growth(case_path, digits, as_json);
        if (*hull) return cmd_hull(points, digits, as_json);
        if (*corpus) return cmd_corpus(corpus_dir, digits, as_json);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParseError;
    } catch (const UndecidedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUndecided;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMismatch;
    }
    return kExitOk;
}
