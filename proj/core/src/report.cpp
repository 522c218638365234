#include "sis/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sis/errors.hpp"
#include "sis/version.hpp"

namespace sis {

namespace {

void dump_rec(const OrderedJson& j, std::string& out, int indent) {
    using value_t = nlohmann::detail::value_t;
    switch (j.type()) {
        case value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                out.append(static_cast<std::size_t>(indent) + 2, ' ');
                out += OrderedJson(it.key()).dump();
                out += ": ";
                dump_rec(it.value(), out, indent + 2);
                if (i + 1 < j.size()) out += ",";
                out += "\n";
            }
            out.append(static_cast<std::size_t>(indent), ' ');
            out += "}";
            return;
        }
        case value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                out.append(static_cast<std::size_t>(indent) + 2, ' ');
                dump_rec(j[i], out, indent + 2);
                if (i + 1 < j.size()) out += ",";
                out += "\n";
            }
            out.append(static_cast<std::size_t>(indent), ' ');
            out += "]";
            return;
        }
        case value_t::string:
            out += j.dump();  // nlohmann's escaping is deterministic
            return;
        case value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            return;
        case value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            return;
        case value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            return;
        case value_t::number_float:
            out += format_double(j.get<double>());
            return;
        case value_t::null:
            out += "null";
            return;
        default:
            throw InvariantViolation("unsupported JSON node type in report");
    }
}

}  // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) throw InvariantViolation("non-finite value in report");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

std::string canonical_dump(const OrderedJson& j) {
    std::string out;
    dump_rec(j, out, 0);
    out += "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FileError("cannot open " + path + " for writing");
    f << content;
    f.flush();
    if (!f) throw FileError("write to " + path + " failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FileError("cannot open " + path + " for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

OrderedJson to_json(const GridSpec& grid) {
    return OrderedJson{{"q", grid.q}, {"h", grid.h}};
}

OrderedJson generator_strings(const std::vector<GeneratorSpec>& specs) {
    OrderedJson arr = OrderedJson::array();
    for (const auto& s : specs) arr.push_back(s.to_string());
    return arr;
}

OrderedJson to_json(const ConstantsReport& r) {
    OrderedJson j;
    j["dim"] = r.dim;
    j["r"] = r.r;
    j["C0"] = r.C0;
    j["A_frame"] = r.A_frame;
    j["C0_dual"] = r.C0_tilde;
    j["frame_grid_self_check"] = r.frame_grid_self_check;
    j["C1"] = r.C1;
    j["C1_amalgam_bound"] = r.C1_amalgam_bound;
    j["M_osc"] = r.M_osc;
    j["C2"] = r.C2;
    j["C3"] = r.C3;
    j["alpha"] = r.alpha;
    j["compact_support"] = r.compact_support;
    j["decay_single_point"] = r.decay_single_point;
    j["tail_R"] = r.tail_R;
    j["tail_energy"] = r.tail_energy;
    j["alpha_prime"] = r.alpha_prime;
    j["beta"] = r.beta;
    j["R0"] = r.R0;
    return j;
}

OrderedJson to_json(const TheoremParams& p) {
    OrderedJson j;
    j["R"] = p.R;
    j["delta"] = p.delta;
    j["nu"] = p.nu;
    j["epsilon"] = p.epsilon;
    j["gamma"] = p.gamma;
    j["s_min"] = p.s_min;
    j["A_lower"] = p.A_lower;
    j["N0_budget"] = p.N0_budget;
    return j;
}

OrderedJson to_json(const TrialResult& t) {
    OrderedJson j;
    j["index"] = t.index;
    j["stream"] = t.stream;
    j["lambda_min"] = t.lambda_min;
    j["lambda_min_shifted"] = t.lambda_min_shifted;
    j["covering"] = t.covering;
    j["infimum_ok"] = t.infimum_ok;
    j["covering_ok"] = t.covering_ok;
    j["min_ratio"] = t.min_ratio;
    j["max_ratio"] = t.max_ratio;
    j["lemma_lower"] = t.lemma_lower;
    j["lower_ok"] = t.lower_ok;
    j["upper_ok"] = t.upper_ok;
    j["success"] = t.success;
    return j;
}

OrderedJson to_json(const ExperimentResult& r) {
    OrderedJson j;
    j["generators"] = generator_strings(r.config.generators);
    j["grid"] = to_json(r.config.grid);
    j["seed"] = r.config.seed;
    j["constants"] = to_json(r.constants);
    j["params"] = to_json(r.params);
    j["violations"] = r.violations;
    j["forced"] = !r.violations.empty();
    j["K"] = r.K;
    j["gram_error"] = r.gram_error;
    j["N_R"] = r.N_R;
    j["s"] = r.s;
    j["A_upper"] = r.A_upper;
    j["sigma_sq_bound"] = r.sigma_sq_bound;
    j["B_bound"] = r.B_bound;
    j["funcs_per_trial"] = r.config.funcs_per_trial;
    OrderedJson arr = OrderedJson::array();
    for (const auto& t : r.trials) arr.push_back(to_json(t));
    j["trials"] = arr;
    j["successes"] = r.successes;
    j["rate"] = r.rate;
    j["bound"] = r.bound;
    return j;
}

OrderedJson to_json(const BernsteinReport& r) {
    OrderedJson j;
    j["N"] = r.N;
    j["mc"] = r.mc;
    j["max_mean_dev_se"] = r.max_mean_dev_se;
    j["max_sample_norm"] = r.max_sample_norm;
    j["norm_bound"] = r.norm_bound;
    j["sigma_sq_bound"] = r.sigma_sq_bound;
    j["tail_value"] = r.tail_value;
    return j;
}

OrderedJson to_json(const VerifyReport& r) {
    OrderedJson j;
    j["seed"] = r.seed;
    j["all_pass"] = r.all_pass;
    OrderedJson arr = OrderedJson::array();
    for (const auto& c : r.checks)
        arr.push_back(OrderedJson{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = arr;
    return j;
}

OrderedJson spectrum_json(const Spectrum& spec, long K, double gram_error,
                          double bound_beta_formula) {
    OrderedJson j;
    j["R"] = spec.R;
    j["K"] = K;
    j["rows"] = spec.map.rows();
    j["N_R"] = spec.N_half;
    j["raw_min"] = spec.raw_min;
    j["raw_max"] = spec.raw_max;
    j["gram_error"] = gram_error;
    j["bound_beta_formula"] = bound_beta_formula;
    double trace = 0.0;
    OrderedJson lam = OrderedJson::array();
    for (long i = 0; i < spec.lambdas.size(); ++i) {
        trace += spec.lambdas(i);
        lam.push_back(spec.lambdas(i));
    }
    j["trace"] = trace;
    j["lambdas"] = lam;
    return j;
}

std::string spectrum_csv(const Spectrum& spec) {
    std::string out = "index,lambda\n";
    for (long i = 0; i < spec.lambdas.size(); ++i) {
        out += std::to_string(i);
        out += ",";
        out += format_double(spec.lambdas(i));
        out += "\n";
    }
    return out;
}

std::string trials_csv(const std::vector<TrialResult>& trials) {
    std::string out = "trial,lambda_min,N0,min_ratio,max_ratio,pass\n";
    for (const auto& t : trials) {
        out += std::to_string(t.index);
        out += "," + format_double(t.lambda_min);
        out += "," + std::to_string(t.covering);
        out += "," + format_double(t.min_ratio);
        out += "," + format_double(t.max_ratio);
        out += std::string(",") + (t.success ? "1" : "0");
        out += "\n";
    }
    return out;
}

OrderedJson report_envelope(const std::string& command, OrderedJson config, OrderedJson result,
                            double duration_seconds) {
    OrderedJson j;
    j["tool"] = OrderedJson{{"name", "sislab"},
                            {"version", kToolVersion},
                            {"rng", kRngId}};
    j["command"] = command;
    j["config"] = std::move(config);
    j["result"] = std::move(result);
    j["duration_seconds"] = duration_seconds;
    return j;
}

}  // namespace sis
