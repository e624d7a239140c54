#include "ratingforge/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ratingforge/numeric.hpp"

namespace ratingforge::io {

using ordered_json = nlohmann::ordered_json;

namespace {

void require_keys(const ordered_json& j, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok |= (it.key() == k);
        if (!ok) throw spec_error(where + ": unknown field '" + it.key() + "'");
    }
}

double need_num(const ordered_json& j, const std::string& where, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw spec_error(where + ": missing numeric field '" + key + "'");
    return j[key].get<double>();
}

double opt_num(const ordered_json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    return j[key].get<double>();
}

std::vector<double> need_array(const ordered_json& j, const std::string& where,
                               const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        throw spec_error(where + ": missing array field '" + key + "'");
    return j[key].get<std::vector<double>>();
}

Distribution parse_distribution(const ordered_json& j, Support s) {
    std::string fam = j.value("family", "");
    if (fam == "uniform") {
        require_keys(j, "distribution", {"family"});
        return Distribution::uniform(s);
    }
    if (fam == "truncated-exponential") {
        require_keys(j, "distribution", {"family", "rate"});
        return Distribution::truncated_exponential(s, need_num(j, "distribution", "rate"));
    }
    if (fam == "truncated-pareto") {
        require_keys(j, "distribution", {"family", "alpha", "shift"});
        return Distribution::truncated_pareto(s, need_num(j, "distribution", "alpha"),
                                              opt_num(j, "shift", 0.0));
    }
    if (fam == "triangular") {
        require_keys(j, "distribution", {"family", "peak", "floor"});
        return Distribution::triangular(s, need_num(j, "distribution", "peak"),
                                        opt_num(j, "floor", 0.0));
    }
    if (fam == "beta-poly") {
        require_keys(j, "distribution", {"family", "a", "b", "floor"});
        return Distribution::beta_poly(s, (int)need_num(j, "distribution", "a"),
                                       (int)need_num(j, "distribution", "b"),
                                       opt_num(j, "floor", 0.0));
    }
    if (fam == "tabulated") {
        require_keys(j, "distribution", {"family", "nodes", "density"});
        return Distribution::tabulated(need_array(j, "distribution", "nodes"),
                                       need_array(j, "distribution", "density"));
    }
    throw spec_error("distribution: unknown family '" + fam + "'");
}

CostFn parse_cost(const ordered_json& j) {
    std::string fam = j.value("family", "");
    if (fam == "power") {
        require_keys(j, "cost", {"family", "p"});
        return CostFn::power(need_num(j, "cost", "p"));
    }
    if (fam == "scaled-power") {
        require_keys(j, "cost", {"family", "scale", "p"});
        return CostFn::scaled_power(need_num(j, "cost", "scale"), need_num(j, "cost", "p"));
    }
    if (fam == "tabulated") {
        require_keys(j, "cost", {"family", "q", "c"});
        return CostFn::tabulated(need_array(j, "cost", "q"), need_array(j, "cost", "c"));
    }
    throw spec_error("cost: unknown family '" + fam + "'");
}

BetaSpec parse_beta(const ordered_json& j, const std::string& where) {
    if (j.is_array()) {
        auto v = j.get<std::vector<double>>();
        if (v.size() != 2) throw spec_error(where + ": affine beta needs [b0, b1]");
        return BetaSpec::affine(v[0], v[1]);
    }
    if (j.is_object()) {
        require_keys(j, where, {"nodes", "values"});
        return BetaSpec::tabulated(need_array(j, where, "nodes"),
                                   need_array(j, where, "values"));
    }
    throw spec_error(where + ": beta must be [b0, b1] or {nodes, values}");
}

Objective parse_objective(const ordered_json& j) {
    std::string fam = j.value("family", "");
    if (fam == "quality-max") {
        require_keys(j, "objective", {"family"});
        return Objective::quality_max();
    }
    if (fam == "linear-delegation") {
        require_keys(j, "objective", {"family", "alpha", "beta"});
        if (!j.contains("beta")) throw spec_error("objective: linear-delegation needs beta");
        return Objective::linear_delegation(parse_beta(j["beta"], "objective.beta"),
                                            need_num(j, "objective", "alpha"));
    }
    if (fam == "quadratic-loss") {
        require_keys(j, "objective", {"family", "beta"});
        BetaSpec beta = j.contains("beta") ? parse_beta(j["beta"], "objective.beta")
                                           : BetaSpec::affine(1.0);
        return Objective::quadratic_loss(beta);
    }
    if (fam == "custom-tabulated") {
        require_keys(j, "objective", {"family", "q_nodes", "theta_nodes", "psi_q"});
        auto qs = need_array(j, "objective", "q_nodes");
        auto ts = need_array(j, "objective", "theta_nodes");
        if (!j.contains("psi_q") || !j["psi_q"].is_array())
            throw spec_error("objective: custom-tabulated needs psi_q rows");
        std::vector<std::vector<double>> rows;
        for (const auto& row : j["psi_q"]) rows.push_back(row.get<std::vector<double>>());
        return Objective::custom(qs, ts, rows);
    }
    throw spec_error("objective: unknown family '" + fam + "'");
}

NumericOptions parse_options(const ordered_json& j) {
    NumericOptions o;
    require_keys(j, "options",
                 {"tol_root", "quad_rel", "quad_abs", "tol_cond", "tol_mono", "grid_n",
                  "scan_n", "allow_linear_cost"});
    o.tol_root = opt_num(j, "tol_root", o.tol_root);
    o.quad_rel = opt_num(j, "quad_rel", o.quad_rel);
    o.quad_abs = opt_num(j, "quad_abs", o.quad_abs);
    o.tol_cond = opt_num(j, "tol_cond", o.tol_cond);
    o.tol_mono = opt_num(j, "tol_mono", o.tol_mono);
    o.grid_n = (std::size_t)opt_num(j, "grid_n", (double)o.grid_n);
    o.scan_n = (std::size_t)opt_num(j, "scan_n", (double)o.scan_n);
    if (j.contains("allow_linear_cost")) o.allow_linear_cost = j["allow_linear_cost"].get<bool>();
    return o;
}

ordered_json report_json(const ConditionReport& rep) {
    ordered_json j;
    j["id"] = rep.id;
    j["holds"] = rep.holds;
    j["margin"] = rep.margin;
    j["witness"] = rep.witness;
    j["cutoff"] = rep.cutoff;
    if (rep.segment >= 0) j["segment"] = rep.segment;
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

}  // namespace

ProblemSpec load_problem(const std::string& json_text) {
    ordered_json root = ordered_json::parse(json_text);
    if (!root.contains("problem")) throw spec_error("config: missing 'problem'");
    const auto& p = root["problem"];
    require_keys(p, "problem", {"support", "distribution", "cost", "objective", "options"});
    if (!p.contains("support")) throw spec_error("problem: missing support");
    require_keys(p["support"], "support", {"theta_lo", "theta_hi"});
    Support s{need_num(p["support"], "support", "theta_lo"),
              need_num(p["support"], "support", "theta_hi")};
    if (!p.contains("distribution") || !p.contains("cost") || !p.contains("objective"))
        throw spec_error("problem: needs distribution, cost and objective");
    NumericOptions opts =
        p.contains("options") ? parse_options(p["options"]) : NumericOptions{};
    return ProblemSpec::make(s, parse_distribution(p["distribution"], s),
                             parse_cost(p["cost"]), parse_objective(p["objective"]), opts);
}

ProblemSpec load_problem_file(const std::string& path) {
    return load_problem(read_file(path));
}

std::string to_json(const ConditionReport& rep) { return report_json(rep).dump(2); }

std::string to_json(const SBundle& b) {
    ordered_json j;
    j["S"] = report_json(b.S);
    j["S1"] = report_json(b.S1);
    j["S2"] = report_json(b.S2);
    j["A"] = b.A;
    return j.dump(2);
}

std::string to_json(const SolveResult& res, const ProblemSpec& spec) {
    ordered_json j;
    j["regime"] = res.regime;
    j["cutoff"] = res.cutoff;
    j["value"] = res.value;
    j["tie_regimes"] = res.tie_regimes;
    j["plateau"] = res.plateau;
    j["maximizing_set"] = {res.set_lo, res.set_hi};
    ordered_json segs = ordered_json::array();
    for (const Segment& s : res.scheme.segments) {
        ordered_json sj;
        sj["lo"] = s.lo;
        sj["hi"] = s.hi;
        sj["kind"] = to_string(s.kind);
        if (s.kind == SegmentKind::pooling) sj["standard"] = s.standard;
        segs.push_back(sj);
    }
    j["segments"] = segs;
    j["conditions"] = ordered_json::object();
    j["conditions"]["S"] = report_json(res.s_reports.S);
    j["conditions"]["S1"] = report_json(res.s_reports.S1);
    j["conditions"]["S2"] = report_json(res.s_reports.S2);
    j["conditions"]["C"] = report_json(res.c_report);
    j["A"] = res.s_reports.A;
    j["sufficiency_only"] = res.sufficiency_only;
    j["oracle"] = ordered_json::object();
    j["oracle"]["ran"] = res.oracle_ran;
    if (res.oracle_ran) {
        j["oracle"]["agrees"] = res.oracle_agrees;
        j["oracle"]["value"] = res.oracle_value;
        j["oracle"]["menu"] = res.oracle_menu;
    }
    (void)spec;
    return j.dump(2);
}

std::string to_json(const QuasiClass& qc) {
    ordered_json j;
    j["label"] = qc.label;
    j["labels"] = qc.labels;
    j["witness_cutoff"] = qc.witness_cutoff;
    ordered_json reps = ordered_json::array();
    for (const auto& r : qc.reports) reps.push_back(report_json(r));
    j["reports"] = reps;
    return j.dump(2);
}

std::string to_json(const FeasibilityReport& rep) {
    ordered_json j;
    j["mps_holds"] = rep.mps_holds;
    j["mps_margin"] = rep.mps_margin;
    j["has_violation"] = rep.has_violation;
    if (rep.has_violation) j["first_violation_theta"] = rep.first_violation_theta;
    j["bp_residual"] = rep.bp_residual;
    j["bp_decides"] = rep.bp_decides;
    return j.dump(2);
}

std::string to_json(const FeeDesign& fd) {
    ordered_json j;
    j["rho"] = fd.rho;
    j["cutoff"] = fd.cutoff;
    j["fee"] = fd.fee;
    j["outside_wage"] = fd.outside_wage;
    j["max_w_slope"] = fd.max_w_slope;
    return j.dump(2);
}

std::string to_json(const IcAuditReport& rep) {
    ordered_json j;
    j["ok"] = rep.ok;
    j["max_residual"] = rep.max_residual;
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks) {
        ordered_json cj;
        cj["what"] = c.what;
        cj["at"] = c.at;
        cj["residual"] = c.residual;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    return j.dump(2);
}

namespace {

void append_csv_number(std::ostringstream& os, double x) {
    char buf[32];
    snprintf(buf, sizeof(buf), "%.17g", x);
    os << buf;
}

}  // namespace

std::string scheme_to_csv(const ProblemSpec& spec, const DeterministicScheme& scheme,
                          std::size_t rows_per_segment) {
    std::ostringstream os;
    os << "theta,q,segment_kind\n";
    for (std::size_t i = 0; i < scheme.segments.size(); ++i) {
        const Segment& s = scheme.segments[i];
        bool last = i + 1 == scheme.segments.size();
        std::size_t rows = std::max<std::size_t>(rows_per_segment, 2);
        for (std::size_t k = 0; k < rows; ++k) {
            double t = s.lo + (s.hi - s.lo) * double(k) / double(rows - 1);
            if (k + 1 == rows && !last) break;  // right-open: next segment owns s.hi
            double q = s.kind == SegmentKind::reveal ? spec.q_full(t)
                       : s.kind == SegmentKind::pooling ? s.standard
                                                        : 0.0;
            append_csv_number(os, t);
            os << ',';
            append_csv_number(os, q);
            os << ',' << to_string(s.kind) << '\n';
        }
    }
    return os.str();
}

DeterministicScheme scheme_from_csv(const ProblemSpec& spec, const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line) || line != "theta,q,segment_kind")
        throw spec_error("scheme csv: expected header 'theta,q,segment_kind'");
    DeterministicScheme sch;
    std::string cur_kind;
    double cur_lo = 0.0, cur_standard = 0.0, last_theta = 0.0;
    bool any = false;
    auto flush = [&](double hi) {
        Segment s;
        s.lo = cur_lo;
        s.hi = hi;
        s.kind = segment_kind_from_string(cur_kind);
        s.standard = s.kind == SegmentKind::pooling ? cur_standard : 0.0;
        sch.segments.push_back(s);
    };
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, kind;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') ||
            !std::getline(ls, kind))
            throw spec_error("scheme csv: malformed row '" + line + "'");
        double theta = std::stod(a), q = std::stod(b);
        if (!any) {
            cur_kind = kind;
            cur_lo = theta;
            cur_standard = q;
            any = true;
        } else if (kind != cur_kind) {
            flush(theta);
            cur_kind = kind;
            cur_lo = theta;
            cur_standard = q;
        }
        last_theta = theta;
    }
    if (!any) throw spec_error("scheme csv: no rows");
    flush(std::max(last_theta, spec.theta_hi()));
    sch.segments.back().hi = spec.theta_hi();
    return sch;
}

std::string allocation_to_csv(const Allocation& alloc, const std::vector<double>* D) {
    std::ostringstream os;
    os << (D ? "theta,q,w,D\n" : "theta,q,w\n");
    for (std::size_t i = 0; i < alloc.theta.size(); ++i) {
        append_csv_number(os, alloc.theta[i]);
        os << ',';
        append_csv_number(os, alloc.q[i]);
        os << ',';
        append_csv_number(os, alloc.w[i]);
        if (D) {
            os << ',';
            append_csv_number(os, (*D)[i]);
        }
        os << '\n';
    }
    return os.str();
}

Allocation allocation_from_csv(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line)) throw spec_error("allocation csv: empty");
    bool has_d = line == "theta,q,w,D";
    if (!has_d && line != "theta,q,w")
        throw spec_error("allocation csv: expected header 'theta,q,w[,D]'");
    Allocation a;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f1, f2, f3, f4;
        if (!std::getline(ls, f1, ',') || !std::getline(ls, f2, ',') ||
            !std::getline(ls, f3, ','))
            throw spec_error("allocation csv: malformed row '" + line + "'");
        if (has_d) std::getline(ls, f4, ',');
        a.theta.push_back(std::stod(f1));
        a.q.push_back(std::stod(f2));
        a.w.push_back(std::stod(f3));
    }
    a.validate();
    return a;
}

std::string conditions_to_csv(const std::vector<ConditionReport>& reports) {
    std::ostringstream os;
    os << "id,holds,margin,witness\n";
    for (const auto& r : reports) {
        os << r.id << ',' << (r.holds ? 1 : 0) << ',';
        append_csv_number(os, r.margin);
        os << ',';
        append_csv_number(os, r.witness);
        os << '\n';
    }
    return os.str();
}

std::string menu_choices_to_csv(const ProblemSpec& spec, const Menu& menu, std::size_t n) {
    std::ostringstream os;
    os << "theta,chosen_q\n";
    for (double t : num::linspace(spec.theta_lo(), spec.theta_hi(), n)) {
        if (t <= 0.0) t = 1e-12;
        append_csv_number(os, t);
        os << ',';
        append_csv_number(os, best_response(spec.cost(), menu, t));
        os << '\n';
    }
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw spec_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw spec_error("cannot write file: " + path);
    f << content;
}

}  // namespace ratingforge::io
