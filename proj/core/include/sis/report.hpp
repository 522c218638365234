#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sis/constants.hpp"
#include "sis/localization.hpp"
#include "sis/sampling.hpp"
#include "sis/verify.hpp"

namespace sis {

using OrderedJson = nlohmann::ordered_json;

// Fixed %.17g rendering, which parses back to the same IEEE double; throws
// on non-finite input (reports must never contain one).
std::string format_double(double v);

// Deterministic serialization: insertion-ordered keys, two-space indent,
// %.17g floats, LF newlines, one trailing newline. Dump / parse / dump is
// byte-stable.
std::string canonical_dump(const OrderedJson& j);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

OrderedJson to_json(const GridSpec& grid);
OrderedJson to_json(const ConstantsReport& report);
OrderedJson to_json(const TheoremParams& params);
OrderedJson to_json(const TrialResult& trial);
OrderedJson to_json(const ExperimentResult& result);
OrderedJson to_json(const BernsteinReport& report);
OrderedJson to_json(const VerifyReport& report);
OrderedJson generator_strings(const std::vector<GeneratorSpec>& specs);

// Spectrum summary (counts, extremes, eigenvalue list) for the JSON report;
// the per-index table goes to CSV.
OrderedJson spectrum_json(const Spectrum& spec, long K, double gram_error,
                          double bound_beta_formula);

// CSV with header "index,lambda".
std::string spectrum_csv(const Spectrum& spec);

// Per-trial table for experiment runs.
std::string trials_csv(const std::vector<TrialResult>& trials);

// Standard report envelope: tool identity and RNG scheme, the echoed
// configuration, the result payload, and the wall-clock duration (the only
// nondeterministic field, placed last so consumers can strip it).
OrderedJson report_envelope(const std::string& command, OrderedJson config, OrderedJson result,
                            double duration_seconds);

}  // namespace sis
