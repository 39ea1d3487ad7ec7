#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adetau/frobenius.hpp"
#include "adetau/integrality.hpp"
#include "adetau/invariants.hpp"
#include "adetau/verify.hpp"

using namespace adetau;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string family;
    int r = 0;
    int l = 0;
    int gmax = 10;
    std::string method;
    std::string format = "csv";
    std::string output;
    int threads = 0;
    bool verify = false;
};

// Resolved (family, Coxeter number) from the rank flags.
std::pair<Family, int> resolve_family(const RunConfig& c) {
    auto fam = parse_family(c.family);
    if (!fam) throw UsageError("unknown family '" + c.family + "' (expected a, d or e6)");
    switch (*fam) {
        case Family::A:
            if (c.l) throw UsageError("family a takes --r, not --l");
            if (c.r < 2) throw UsageError("family a needs --r >= 2");
            return {*fam, c.r};
        case Family::D:
            if (c.r) throw UsageError("family d takes --l, not --r");
            if (c.l < 4) throw UsageError("family d needs --l >= 4");
            return {*fam, 2 * c.l - 2};
        case Family::E6:
            if (c.r || c.l) throw UsageError("family e6 takes no rank flag");
            return {*fam, 12};
    }
    throw UsageError("unknown family");
}

Method default_method(Family fam, int r) {
    if (fam == Family::A && r == 5) return Method::Recursion;
    if (fam == Family::E6) return Method::Ode;
    return Method::Genfunc;
}

std::vector<Method> resolve_methods(const RunConfig& c, Family fam, int r) {
    if (c.method.empty()) return {default_method(fam, r)};
    std::vector<Method> out;
    if (c.method == "all") {
        for (Method m : {Method::Recursion, Method::Closed, Method::Genfunc, Method::Hyper, Method::Product, Method::Ode})
            if (method_supported(fam, r, m)) out.push_back(m);
        return out;
    }
    std::istringstream is(c.method);
    for (std::string tok; std::getline(is, tok, ',');) {
        auto m = parse_method(tok);
        if (!m) throw UsageError("unknown method '" + tok + "'");
        if (!method_supported(fam, r, *m))
            throw UsageError("method " + tok + " is not available for family " + c.family + " r=" + std::to_string(r));
        out.push_back(*m);
    }
    return out;
}

void apply_threads(int threads) {
    if (threads > 0) setenv("ADETAU_THREADS", std::to_string(threads).c_str(), 1);
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw UsageError("cannot open output file " + path);
    os << text;
}

std::string factored(const Int& n) {
    if (n == 1) return "1";
    std::string s;
    for (auto& [p, e] : factor_int(n)) {
        if (!s.empty()) s += '*';
        s += p.get_str();
        if (e > 1) s += '^' + std::to_string(e);
    }
    return s;
}

int cmd_tau(const RunConfig& c) {
    auto [fam, r] = resolve_family(c);
    if (c.gmax < 0) throw UsageError("--gmax must be >= 0");
    if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
    auto methods = resolve_methods(c, fam, r);
    apply_threads(c.threads);

    std::vector<TauRecord> recs;
    std::vector<std::vector<TauRecord>> per_method;
    for (Method m : methods) {
        auto t = tau_table(fam, r, c.gmax, m);
        per_method.push_back(t);
        recs.insert(recs.end(), t.begin(), t.end());
    }
    if (c.verify) {
        std::vector<Rat> ref;
        std::string against;
        if (fam == Family::E6) {
            for (auto& row : duality_report("E6"))
                if (!row.equal) {
                    std::cerr << "cross-check failed: E6 theta(v*) alpha=" << row.alpha << " m=" << row.m << '\n';
                    return kExitInternal;
                }
        } else {
            Method other = methods.front() == Method::Genfunc ? Method::Closed : Method::Genfunc;
            for (auto& t : tau_table(fam, r, c.gmax, other)) ref.push_back(t.value);
            against = method_tag(other);
        }
        for (auto& t : per_method)
            for (auto& rec : t)
                if (!ref.empty() && rec.value != ref[static_cast<size_t>(rec.g)]) {
                    std::cerr << "cross-check failed: g=" << rec.g << ' ' << method_tag(rec.method) << '=' << rec.value
                              << ' ' << against << '=' << ref[static_cast<size_t>(rec.g)] << '\n';
                    return kExitInternal;
                }
    }
    if (c.format == "csv") {
        emit(records_to_csv(recs), c.output);
    } else {
        ojson cfg = {{"command", "tau"}, {"family", family_tag(fam)}, {"r", r}, {"gmax", c.gmax}};
        auto arr = ojson::array();
        for (Method m : methods) arr.push_back(method_tag(m));
        cfg["methods"] = arr;
        emit(records_to_json(recs, cfg).dump(2) + "\n", c.output);
    }
    return kExitOk;
}

SuiteReport run_suite(const std::string& suite, int gmax) {
    if (suite == "kernels") return verify_kernels();
    if (suite == "psido-oracle") return verify_psido_oracle();
    if (suite == "cross-method") {
        CrossMethodOptions opt;
        if (gmax >= 0) opt.gmax = gmax;
        opt.a4_recursion_gmax = gmax >= 0 ? std::max(gmax, 0) : 300;
        return verify_cross_method(opt);
    }
    if (suite == "integrality") return verify_integrality(gmax >= 0 ? gmax : 300, gmax >= 0 ? std::min(gmax, 200) : 200);
    if (suite == "duality") return verify_duality();
    if (suite == "asymptotics") return verify_asymptotics();
    if (suite == "arrangement") return verify_arrangement();
    throw UsageError("unknown suite '" + suite + "'");
}

int cmd_verify(const std::string& suite, int gmax, int threads) {
    apply_threads(threads);
    auto rep = run_suite(suite, gmax);
    for (auto& chk : rep.checks) {
        std::cout << (chk.pass ? "PASS " : "FAIL ") << chk.name;
        if (!chk.detail.empty()) std::cout << (chk.pass ? "  [" : "  counterexample: ") << chk.detail << (chk.pass ? "]" : "");
        std::cout << '\n';
    }
    std::cout << (rep.pass() ? "suite " + suite + ": all checks passed\n" : "suite " + suite + ": FAILED\n");
    return rep.pass() ? kExitOk : kExitFail;
}

int cmd_report_integrality(int gmax, const std::string& format, const std::string& output) {
    if (gmax < 0) throw UsageError("--gmax must be >= 0");
    if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
    auto rows = integrality_report(a4_recursion_table(gmax));
    bool any = false;
    std::ostringstream os;
    ojson j = ojson::array();
    if (format == "csv") os << "g,tau,a,b,c,tau_den,a_den,b_den,c_den,flagged\n";
    for (auto& row : rows) {
        std::string flags;
        for (auto& p : row.flagged) flags += (flags.empty() ? "" : " ") + p.get_str();
        any = any || !row.flagged.empty();
        if (format == "csv") {
            os << row.g << ',' << row.tau << ',' << row.abc.a << ',' << row.abc.b << ',' << row.abc.c << ','
               << factored(row.tau.den()) << ',' << factored(row.abc.a.den()) << ',' << factored(row.abc.b.den()) << ','
               << factored(row.abc.c.den()) << ',' << flags << '\n';
        } else {
            j.push_back({{"g", row.g},
                         {"tau", row.tau.str()},
                         {"a", row.abc.a.str()},
                         {"b", row.abc.b.str()},
                         {"c", row.abc.c.str()},
                         {"denominators",
                          {{"tau", factored(row.tau.den())},
                           {"a", factored(row.abc.a.den())},
                           {"b", factored(row.abc.b.den())},
                           {"c", factored(row.abc.c.den())}}},
                         {"flagged", flags}});
        }
    }
    if (format == "json") {
        ojson out = {{"meta", {{"version", ADETAU_VERSION}, {"config", {{"command", "report-integrality"}, {"gmax", gmax}}}}},
                     {"rows", j}};
        os << out.dump(2) << '\n';
    }
    emit(os.str(), output);
    return any ? kExitFail : kExitOk;
}

int cmd_report_asymptotics(const RunConfig& c) {
    auto [fam, r] = resolve_family(c);
    if (c.gmax < 2) throw UsageError("--gmax must be >= 2");
    apply_threads(c.threads);
    auto methods = resolve_methods(c, fam, r);
    auto tau = tau_table(fam, r, c.gmax, methods.front());
    std::ostringstream os;
    os << "family,r,g,log_prediction,log_actual,ratio\n";
    os.precision(12);
    for (int g = 1; g <= c.gmax; ++g) {
        if (tau[static_cast<size_t>(g)].value.is_zero()) continue;
        try {
            auto pt = asymptotic_predict(fam, r, g, tau[static_cast<size_t>(g)].value);
            os << family_tag(fam) << ',' << r << ',' << g << ',' << pt.log_prediction << ',' << pt.log_actual << ','
               << pt.ratio << '\n';
        } catch (const std::domain_error&) {
        }
    }
    emit(os.str(), c.output);
    return kExitOk;
}

int cmd_arrangement(const std::string& which, const std::string& output) {
    std::vector<FloorFuncSpec> specs;
    for (int j = 1; j <= 4; ++j) {
        for (auto s : {f_spec(j), g_spec(j)})
            if (which == "all" || which == s.name) specs.push_back(s);
    }
    if (specs.empty()) throw UsageError("unknown arrangement '" + which + "' (f1..f4, g1..g4 or all)");
    ojson out = ojson::array();
    for (auto& s : specs) {
        auto j = arrangement_to_json(arrangement_analyze(s));
        ojson row = {{"name", s.name}};
        for (auto& [k, v] : j.items()) row[k] = v;
        out.push_back(row);
    }
    emit(out.dump(2) + "\n", output);
    return kExitOk;
}

int cmd_duality(const std::string& fam, const std::string& output) {
    auto rows = duality_report(fam);
    ojson out = {{"family", fam}, {"rows", duality_to_json(rows)}};
    emit(out.dump(2) + "\n", output);
    for (auto& r : rows)
        if (!r.equal) return kExitFail;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact one-point invariants for the A, D and E6 families"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ADETAU_VERSION);

    RunConfig cfg;
    auto* tau = app.add_subcommand("tau", "Tabulate tau_g for g = 0..gmax");
    tau->add_option("--family", cfg.family, "a, d or e6")->required();
    tau->add_option("--r", cfg.r, "Coxeter number for family a");
    tau->add_option("--l", cfg.l, "rank for family d");
    tau->add_option("--gmax", cfg.gmax, "largest genus");
    tau->add_option("--method", cfg.method, "closed, genfunc, hyper, product, psido, recursion, ode, a comma list, or all");
    tau->add_option("--format", cfg.format, "csv or json");
    tau->add_option("--output,-o", cfg.output, "output file (default stdout)");
    tau->add_option("--threads", cfg.threads, "worker threads (overrides ADETAU_THREADS)");
    tau->add_flag("--verify", cfg.verify, "cross-check against a second method; exit 3 on mismatch");

    std::string suite;
    int vgmax = -1, vthreads = 0;
    auto* ver = app.add_subcommand("verify", "Run a verification suite");
    ver->add_option("suite", suite, "kernels, psido-oracle, cross-method, integrality, duality, asymptotics, arrangement")
        ->required();
    ver->add_option("--gmax", vgmax, "genus bound for cross-method and integrality");
    ver->add_option("--threads", vthreads, "worker threads");

    int igmax = 10;
    std::string iformat = "csv", ioutput;
    auto* integ = app.add_subcommand("report-integrality", "Normalized a_g, b_g, c_g with factored denominators");
    integ->add_option("--gmax", igmax, "largest genus");
    integ->add_option("--format", iformat, "csv or json");
    integ->add_option("--output,-o", ioutput, "output file");

    RunConfig acfg;
    acfg.gmax = 100;
    auto* asy = app.add_subcommand("report-asymptotics", "Ratio of tau_g to its large-genus prediction");
    asy->add_option("--family", acfg.family, "a, d or e6")->required();
    asy->add_option("--r", acfg.r, "Coxeter number for family a");
    asy->add_option("--l", acfg.l, "rank for family d");
    asy->add_option("--gmax", acfg.gmax, "largest genus");
    asy->add_option("--method", acfg.method, "engine");
    asy->add_option("--output,-o", acfg.output, "output file");
    asy->add_option("--threads", acfg.threads, "worker threads");

    std::string which = "all", aoutput;
    auto* arr = app.add_subcommand("arrangement", "Exact cell decomposition of the floor-function sums");
    arr->add_option("--spec", which, "f1..f4, g1..g4 or all");
    arr->add_option("--output,-o", aoutput, "output file");

    std::string dfam, doutput;
    auto* dua = app.add_subcommand("duality", "theta(v*) against tau for one catalogue family");
    dua->add_option("--family", dfam, "A1, A2, A4, D4 or E6")->required();
    dua->add_option("--output,-o", doutput, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*tau) return cmd_tau(cfg);
        if (*ver) return cmd_verify(suite, vgmax, vthreads);
        if (*integ) return cmd_report_integrality(igmax, iformat, ioutput);
        if (*asy) return cmd_report_asymptotics(acfg);
        if (*arr) return cmd_arrangement(which, aoutput);
        if (*dua) return cmd_duality(dfam, doutput);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
