#include "ratingforge/runner.hpp"

#include <filesystem>
#include <iostream>

#include <nlohmann/json.hpp>

#include "ratingforge/io.hpp"
#include "ratingforge/numeric.hpp"

namespace ratingforge {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Ctx {
    ordered_json root;
    ProblemSpec spec;
    fs::path out;
    fs::path config_dir;
    std::size_t grid_n;
    bool quiet;
};

void emit(const Ctx& c, const std::string& name, const std::string& content) {
    io::write_file((c.out / name).string(), content);
    if (!c.quiet) std::cout << "wrote " << (c.out / name).string() << "\n";
}

ordered_json section(const Ctx& c, const char* key) {
    if (c.root.contains(key)) return c.root[key];
    return ordered_json::object();
}

int cmd_solve(const Ctx& c) {
    std::size_t oracle_n = c.grid_n ? c.grid_n : 12;
    SolveResult res = classify_regime(c.spec, oracle_n);
    emit(c, "result.json", io::to_json(res, c.spec));
    emit(c, "scheme.csv", io::scheme_to_csv(c.spec, res.scheme));
    std::vector<ConditionReport> reps{res.s_reports.S, res.s_reports.S1, res.s_reports.S2,
                                      res.c_report};
    emit(c, "conditions.csv", io::conditions_to_csv(reps));
    return 0;
}

int cmd_classify(const Ctx& c) {
    QuasiClass qc = classify_quasi(c.spec);
    SolveResult res = classify_regime(c.spec, c.grid_n ? c.grid_n : 12);
    ordered_json j;
    j["quasi"] = ordered_json::parse(io::to_json(qc));
    j["solve"] = ordered_json::parse(io::to_json(res, c.spec));
    emit(c, "result.json", j.dump(2));
    emit(c, "scheme.csv", io::scheme_to_csv(c.spec, res.scheme));
    return 0;
}

int cmd_check_conditions(const Ctx& c) {
    ordered_json sec = section(c, "check");
    double cutoff;
    if (sec.contains("cutoff")) {
        cutoff = sec["cutoff"].get<double>();
    } else {
        cutoff = solve_cutoff(c.spec).theta0;
    }
    CharacteristicCtx ctx(c.spec, cutoff);
    SBundle sb = check_S(ctx);
    ConditionReport cc = check_C(ctx);
    auto [ab1, ab2] = check_AB(c.spec, cutoff);
    DeterministicScheme scheme = build_scheme(c.spec, cutoff);
    std::vector<ConditionReport> reps{sb.S, sb.S1, sb.S2, cc, ab1, ab2};
    for (const Segment& s : scheme.segments) {
        if (s.kind == SegmentKind::reveal) reps.push_back(check_N1(c.spec, s.lo, s.hi));
        if (s.kind == SegmentKind::pooling) {
            bool whole = s.lo <= c.spec.theta_lo() + 1e-9 &&
                         s.hi >= c.spec.theta_hi() - 1e-9;
            reps.push_back(check_N2(c.spec, cutoff, ctx.A(), s.lo, s.hi, whole));
        }
    }
    ordered_json j;
    j["cutoff"] = cutoff;
    ordered_json arr = ordered_json::array();
    for (const auto& r : reps) arr.push_back(ordered_json::parse(io::to_json(r)));
    j["reports"] = arr;
    emit(c, "result.json", j.dump(2));
    emit(c, "conditions.csv", io::conditions_to_csv(reps));
    return 0;
}

int cmd_oracle_compare(const Ctx& c) {
    ordered_json sec = section(c, "oracle");
    std::size_t n = c.grid_n ? c.grid_n : (std::size_t)sec.value("grid_n", 10);
    double cutoff = sec.contains("cutoff") ? sec["cutoff"].get<double>()
                                           : solve_cutoff(c.spec).theta0;
    auto grid = anchored_quality_grid(c.spec, cutoff, n);
    MenuSolution dp = dp_optimal_menu(c.spec, grid);
    MenuSolution bf = brute_force_menus(c.spec, grid);
    ordered_json j;
    j["grid"] = grid;
    j["dp_value"] = dp.value;
    j["brute_value"] = bf.value;
    j["dp_menu"] = dp.menu.levels;
    j["brute_menu"] = bf.menu.levels;
    j["equal"] = (dp.value == bf.value) && (dp.menu.levels == bf.menu.levels);
    emit(c, "result.json", j.dump(2));
    emit(c, "choices.csv", io::menu_choices_to_csv(c.spec, dp.menu, 501));
    return 0;
}

int cmd_stochastic_audit(const Ctx& c) {
    ordered_json sec = section(c, "stochastic");
    Allocation alloc;
    if (sec.contains("allocation_csv")) {
        fs::path p = sec["allocation_csv"].get<std::string>();
        if (p.is_relative()) p = c.config_dir / p;
        alloc = io::allocation_from_csv(io::read_file(p.string()));
        alloc.rent0 = sec.value("rent0", 0.0);
    } else {
        // default: audit the solver's own optimum (w = q)
        SolveResult res = classify_regime(c.spec, 0);
        alloc = allocation_from_scheme(c.spec, res.scheme,
                                       c.grid_n ? c.grid_n : 2001);
    }
    double resid = envelope_residual(c.spec, alloc);
    FeasibilityReport rep = feasibility_check(c.spec, alloc);
    ordered_json j = ordered_json::parse(io::to_json(rep));
    j["envelope_residual"] = resid;
    emit(c, "result.json", j.dump(2));
    emit(c, "allocation.csv", io::allocation_to_csv(alloc, &rep.D));
    return 0;
}

int cmd_signaling(const Ctx& c) {
    ordered_json sec = section(c, "signaling");
    std::size_t n = c.grid_n ? c.grid_n : (std::size_t)sec.value("grid_n", 2001);
    SeparationScheme scheme = full_separation(c.spec, n);
    ConditionReport sep = check_full_separation(c.spec);
    double thetaL = sec.value("theta_L", c.spec.theta_lo());
    ConditionReport top = separation_at_top(c.spec, thetaL);
    ordered_json j;
    j["full_separation"] = ordered_json::parse(io::to_json(sep));
    j["separation_at_top"] = ordered_json::parse(io::to_json(top));
    emit(c, "result.json", j.dump(2));
    Allocation alloc;
    alloc.theta = scheme.theta;
    alloc.q = scheme.q;
    alloc.w = scheme.theta;  // full separation pays the type
    emit(c, "scheme.csv", io::allocation_to_csv(alloc));
    return 0;
}

int cmd_fee_design(const Ctx& c) {
    ordered_json sec = section(c, "fee");
    double rho = sec.value("rho", 1.0);
    std::size_t n = c.grid_n ? c.grid_n : 2001;
    FeeDesign fd = fee_design(c.spec, rho, n);
    emit(c, "result.json", io::to_json(fd));
    Allocation alloc;
    alloc.theta = fd.theta;
    alloc.q = fd.q;
    alloc.w = fd.w;
    emit(c, "design.csv", io::allocation_to_csv(alloc));
    return 0;
}

}  // namespace

int run(const RunConfig& config) {
    try {
        std::string text = io::read_file(config.config_path);
        ordered_json root = ordered_json::parse(text);
        ProblemSpec spec = io::load_problem(text);
        fs::create_directories(config.out_dir);
        Ctx ctx{std::move(root), std::move(spec), fs::path(config.out_dir),
                fs::path(config.config_path).parent_path(), config.grid_n, config.quiet};

        if (config.command == "solve-deterministic") return cmd_solve(ctx);
        if (config.command == "classify") return cmd_classify(ctx);
        if (config.command == "check-conditions") return cmd_check_conditions(ctx);
        if (config.command == "oracle-compare") return cmd_oracle_compare(ctx);
        if (config.command == "stochastic-audit") return cmd_stochastic_audit(ctx);
        if (config.command == "signaling") return cmd_signaling(ctx);
        if (config.command == "fee-design") return cmd_fee_design(ctx);
        std::cerr << "error: unknown command '" << config.command << "'\n";
        return 2;
    } catch (const spec_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const solver_error& e) {
        std::cerr << "solver error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return 3;
    }
}

}  // namespace ratingforge
