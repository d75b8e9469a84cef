#include "etr/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "etr/predicate_spec.hpp"
#include "etr/probe.hpp"
#include "etr/setr.hpp"
#include "etr/wetr.hpp"

namespace etr::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultFuel = 100000;
constexpr std::size_t kDefaultXBudget = 16;
constexpr Natural kDefaultNMax = 4;
constexpr std::uint64_t kDefaultSeed = 1;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("write to " + path + " failed");
}

std::uint64_t default_fuel() {
    const char* env = std::getenv("ETR_DEFAULT_FUEL");
    if (!env || !*env) return kDefaultFuel;
    const std::string text(env);
    if (text.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("ETR_DEFAULT_FUEL must be a positive integer, got \"" + text + "\"");
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        throw ParseError("ETR_DEFAULT_FUEL out of range: " + text);
    }
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

// Inline JSON, or @path to a JSON file.
json predicate_json(const std::string& arg) {
    if (!arg.empty() && arg.front() == '@') return parse_json(read_file(arg.substr(1)), arg.substr(1));
    return parse_json(arg, "--pred");
}

struct InstanceSpec {
    std::string order;
    json predicate;
    Natural n_max = kDefaultNMax;
    std::size_t x_budget = kDefaultXBudget;
    std::uint64_t fuel = kDefaultFuel;
    std::string engine = "wetr";
    std::string trace;
    std::string out;
    std::uint64_t seed = kDefaultSeed;
};

template <class T>
void take(const json& config, const char* key, T& field) {
    auto it = config.find(key);
    if (it == config.end()) return;
    try {
        field = it->get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("config \"") + key + "\": " + e.what());
    }
}

void apply_config(InstanceSpec& spec, const std::string& path) {
    const json config = parse_json(read_file(path), path);
    if (!config.is_object()) throw ParseError(path + ": config must be a JSON object");
    take(config, "order", spec.order);
    take(config, "n_max", spec.n_max);
    take(config, "x_budget", spec.x_budget);
    take(config, "fuel", spec.fuel);
    take(config, "engine", spec.engine);
    take(config, "trace", spec.trace);
    take(config, "out", spec.out);
    take(config, "seed", spec.seed);
    if (auto it = config.find("predicate"); it != config.end())
        spec.predicate = it->is_string() ? predicate_json(it->get<std::string>()) : *it;
}

// Raw command-line values; only options actually given override the config.
struct EvalArgs {
    std::string config, order, pred, engine, trace, out;
    Natural n_max = 0;
    std::size_t x_budget = 0;
    std::uint64_t fuel = 0, seed = 0;
};

void print(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

json descent_json(const setr::MaterializeStats& s) {
    return json{{"evaluations", s.evaluations},
                {"steps", s.total_steps},
                {"descent_violations", s.descent_violations},
                {"inconsistencies", s.inconsistencies},
                {"ok", s.descent_violations == 0 && s.inconsistencies == 0},
                {"first_problem", s.first_problem}};
}

int run_eval(const InstanceSpec& spec, std::ostream& out) {
    if (spec.fuel == 0) throw ParseError("fuel must be positive");
    if (spec.order.empty()) throw ParseError("--order is required");
    if (spec.predicate.is_null()) throw ParseError("--pred is required");
    if (spec.engine != "wetr" && spec.engine != "setr" && spec.engine != "both")
        throw ParseError("engine must be wetr, setr or both");
    const Order X = parse_order(spec.order);
    const PredicatePtr p = make_predicate(spec.predicate, X, spec.seed);
    const bool use_wetr = spec.engine != "setr";
    const bool use_setr = spec.engine != "wetr";
    if (use_setr) setr::require_setr_order(X);
    if (!spec.trace.empty() && !use_setr) throw ParseError("--trace needs the setr engine");

    json summary{{"engine", spec.engine},
                 {"order", X.to_string()},
                 {"predicate", p->name()},
                 {"n_max", spec.n_max},
                 {"x_budget", spec.x_budget},
                 {"fuel", spec.fuel}};
    bool violated = false;
    std::optional<Family> wetr_family, setr_family;

    if (use_wetr) {
        wetr_family = wetr::materialize_family(p, X, spec.n_max, spec.x_budget, spec.fuel);
        const auto report = probe::check_fixpoint(*wetr_family, *p, X, spec.fuel);
        summary["families"]["wetr"] = wetr_family->to_json();
        summary["fixpoint"]["wetr"] = report.to_json();
        violated |= !report.ok;
    }
    if (use_setr) {
        std::ofstream trace;
        setr::StepObserver observer;
        if (!spec.trace.empty()) {
            trace.open(spec.trace, std::ios::binary | std::ios::trunc);
            if (!trace) throw Error("cannot write " + spec.trace);
            observer = [&](Natural n, Code x, std::uint64_t step, const setr::Term& t) {
                trace << json{{"n", n}, {"x", x}, {"step", step}, {"term", t.to_json()},
                              {"rank", setr::rank_beta(t, X, *p).to_json()}}
                             .dump()
                      << '\n';
            };
        }
        setr::MaterializeStats stats;
        setr_family = setr::materialize_family(p, X, spec.n_max, spec.x_budget, spec.fuel, &stats, observer);
        const auto report = probe::check_fixpoint(*setr_family, *p, X, spec.fuel);
        summary["families"]["setr"] = setr_family->to_json();
        summary["fixpoint"]["setr"] = report.to_json();
        summary["rank_descent"] = descent_json(stats);
        violated |= !report.ok || stats.descent_violations != 0 || stats.inconsistencies != 0;
    }
    if (wetr_family && setr_family) {
        const bool agree = wetr_family->members == setr_family->members;
        summary["agree"] = agree;
        violated |= !agree;
    }

    const Family& result = wetr_family ? *wetr_family : *setr_family;
    summary["members"] = result.members.size();
    summary["status"] = violated ? "contract-violation" : "ok";
    if (!spec.out.empty()) write_file(spec.out, result.to_json().dump() + "\n");
    print(out, summary);
    return violated ? kContractViolation : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Effective transfinite recursion engines over computable well-orders", "etr"};
    app.require_subcommand(1);

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Materialize the recursively defined family");
    auto* o_config = eval->add_option("--config", ea.config, "JSON file with instance fields");
    auto* o_order = eval->add_option("--order", ea.order, "Order expression");
    auto* o_pred = eval->add_option("--pred", ea.pred, "Predicate JSON, or @file");
    auto* o_engine = eval->add_option("--engine", ea.engine, "wetr, setr or both")
                         ->check(CLI::IsMember({"wetr", "setr", "both"}));
    auto* o_nmax = eval->add_option("--n-max", ea.n_max, "Stages n < n-max");
    auto* o_xbudget = eval->add_option("--x-budget", ea.x_budget, "Number of enumerated elements x");
    auto* o_fuel = eval->add_option("--fuel", ea.fuel, "Step budget");
    auto* o_out = eval->add_option("--out", ea.out, "Write family.json here");
    auto* o_trace = eval->add_option("--trace", ea.trace, "Write setr steps as JSON lines here");
    auto* o_seed = eval->add_option("--seed", ea.seed, "Default seed for random predicates");

    std::string p_order;
    std::size_t p_length = 10;
    std::uint64_t p_budget = 10000;
    auto* probe_cmd = app.add_subcommand("probe", "Search for a strictly descending chain");
    probe_cmd->add_option("--order", p_order, "Order expression (unsafe exponents allowed)")->required();
    probe_cmd->add_option("--chain-length", p_length, "Target chain length");
    probe_cmd->add_option("--budget", p_budget, "Comparison budget");

    std::string c_family, c_pred, c_order;
    Natural c_nmax = kDefaultNMax;
    std::size_t c_xbudget = kDefaultXBudget;
    std::uint64_t c_fuel = 0, c_seed = kDefaultSeed;
    auto* check = app.add_subcommand("check", "Check a family.json against the fixpoint condition");
    check->add_option("--fixpoint", c_family, "family.json")->required();
    check->add_option("--pred", c_pred, "Predicate JSON, or @file")->required();
    check->add_option("--order", c_order, "Order expression")->required();
    check->add_option("--n-max", c_nmax, "Stages n < n-max");
    check->add_option("--x-budget", c_xbudget, "Number of enumerated elements x");
    auto* c_fuel_opt = check->add_option("--fuel", c_fuel, "Bit budget per prefix");
    check->add_option("--seed", c_seed, "Default seed for random predicates");

    std::string t_order, t_pred, t_out;
    Natural t_n = 0;
    Code t_x = 0;
    std::uint64_t t_fuel = 0, t_seed = kDefaultSeed;
    auto* trace = app.add_subcommand("trace", "Trace one setr evaluation as JSON lines");
    trace->add_option("--order", t_order, "Order expression")->required();
    trace->add_option("--pred", t_pred, "Predicate JSON, or @file")->required();
    trace->add_option("--n", t_n, "Stage n")->required();
    trace->add_option("--x", t_x, "Element code x")->required();
    trace->add_option("--out", t_out, "Write trace.jsonl here instead of stdout");
    auto* t_fuel_opt = trace->add_option("--fuel", t_fuel, "Step budget");
    trace->add_option("--seed", t_seed, "Default seed for random predicates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kInvalid;
    }

    try {
        const std::uint64_t fuel0 = default_fuel();
        if (eval->parsed()) {
            InstanceSpec spec;
            spec.fuel = fuel0;
            if (*o_config) apply_config(spec, ea.config);
            if (*o_order) spec.order = ea.order;
            if (*o_pred) spec.predicate = predicate_json(ea.pred);
            if (*o_engine) spec.engine = ea.engine;
            if (*o_nmax) spec.n_max = ea.n_max;
            if (*o_xbudget) spec.x_budget = ea.x_budget;
            if (*o_fuel) spec.fuel = ea.fuel;
            if (*o_out) spec.out = ea.out;
            if (*o_trace) spec.trace = ea.trace;
            if (*o_seed) spec.seed = ea.seed;
            return run_eval(spec, out);
        }
        if (probe_cmd->parsed()) {
            const Order X = parse_order(p_order, true);
            json report = probe::find_descending_chain(X, p_length, p_budget).to_json();
            report["order"] = X.to_string();
            report["target_length"] = p_length;
            print(out, report);
            return kOk;
        }
        if (check->parsed()) {
            const std::uint64_t fuel = *c_fuel_opt ? c_fuel : fuel0;
            if (fuel == 0) throw ParseError("fuel must be positive");
            const Order X = parse_order(c_order);
            const PredicatePtr p = make_predicate(predicate_json(c_pred), X, c_seed);
            const Family fam = Family::from_json(parse_json(read_file(c_family), c_family), X, c_nmax,
                                                 X.enumerate(c_xbudget));
            const auto report = probe::check_fixpoint(fam, *p, X, fuel);
            print(out, report.to_json());
            return report.ok ? kOk : kContractViolation;
        }
        if (trace->parsed()) {
            const std::uint64_t fuel = *t_fuel_opt ? t_fuel : fuel0;
            if (fuel == 0) throw ParseError("fuel must be positive");
            const Order X = parse_order(t_order);
            setr::require_setr_order(X);
            const PredicatePtr p = make_predicate(predicate_json(t_pred), X, t_seed);
            std::ofstream file;
            if (!t_out.empty()) {
                file.open(t_out, std::ios::binary | std::ios::trunc);
                if (!file) throw Error("cannot write " + t_out);
            }
            std::ostream& sink = t_out.empty() ? out : file;
            setr::EvalOptions options;
            options.on_step = [&](std::uint64_t step, const setr::Term& t) {
                sink << json{{"step", step}, {"term", t.to_json()}, {"rank", setr::rank_beta(t, X, *p).to_json()}}
                            .dump()
                     << '\n';
            };
            const auto r = setr::eval_term(*p, X, t_n, t_x, fuel, options);
            const bool ok = r.descent.ok && !r.inconsistent;
            if (!t_out.empty()) {
                print(out, json{{"value", r.value ? 1 : 0},
                                {"steps", r.steps},
                                {"rank_descent", r.descent.describe()},
                                {"consistent", !r.inconsistent},
                                {"status", ok ? "ok" : "contract-violation"}});
            } else if (!ok) {
                err << "contract violation: " << r.descent.describe() << '\n';
            }
            return ok ? kOk : kContractViolation;
        }
    } catch (const FuelExhausted& e) {
        err << "fuel exhausted: " << e.what() << '\n';
        return kFuelExhausted;
    } catch (const InconsistentPredicate& e) {
        err << "contract violation: " << e.what() << '\n';
        return kContractViolation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kInvalid;
}

}  // namespace etr::cli
