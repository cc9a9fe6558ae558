// Copyright 2026 The probestream Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// probestream: command-line front end.
//
//   run     stream one instance through an engine, optionally verified
//   lemmas  Monte Carlo checks on the hard distribution
//   probes  amortized probe counts across n
//   itree   information-transfer report from a trace or an inline run

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "probestream/probestream.hpp"
#include "probestream/reports.hpp"

namespace ps = probestream;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string problem = "edit";
  std::string alg = "alg2";
  bool alg_given = false;
  std::size_t n = 64;
  unsigned w = 64;
  unsigned delta = 2;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 1;
  bool verify = false;
  bool mod = false;
  bool charge_arrival = false;
  std::string trace;
  std::string format = "csv";
  std::string out;
  std::string fixed_path;
  std::string stream_path;
  std::string input_format = "bytes";
  std::vector<std::size_t> ns;
  std::optional<std::int64_t> base;
};

ps::Problem parse_problem(const std::string& s) {
  if (s == "edit") return ps::Problem::edit;
  if (s == "hamming") return ps::Problem::hamming;
  if (s == "convolution") return ps::Problem::convolution;
  if (s == "lcs") return ps::Problem::lcs;
  throw UsageError("unknown problem '" + s + "'");
}

std::uint64_t require_seed(const Options& o) {
  if (!o.seed) throw UsageError("--seed is required for randomized commands");
  return *o.seed;
}

ps::SymbolString read_symbols(const std::string& path, const std::string& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (format == "bytes") {
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return ps::SymbolString::from_text(text);
  }
  std::vector<ps::Symbol> out;
  std::istringstream is(text);
  long long v;
  while (is >> v) {
    if (v < 0 || v > UINT32_MAX) throw UsageError("symbol code out of range in " + path);
    out.push_back(static_cast<ps::Symbol>(v));
  }
  if (!is.eof()) throw UsageError("non-integer token in " + path);
  return ps::SymbolString(std::move(out));
}

/// Output sink: the --out file or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  bool is_stdout() const { return !file_.is_open(); }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failed");
  }

 private:
  std::ofstream file_;
};

void save_trace(const ps::AccessLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write trace " + path);
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (csv) ps::write_trace_csv(log, out); else ps::write_trace_binary(log, out);
  if (!out) throw IoError("trace write failed");
}

ps::AccessLog load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace " + path);
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  try {
    return csv ? ps::read_trace_csv(in) : ps::read_trace_binary(in);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

std::string wide(const std::optional<ps::Wide>& v) { return v ? ps::to_string(*v) : ""; }

int cmd_run(const Options& o) {
  const ps::Problem problem = parse_problem(o.problem);
  const ps::Variant variant = ps::parse_variant(o.alg);
  if (problem != ps::Problem::edit && o.alg_given && variant != ps::Variant::naive) {
    throw UsageError("--alg applies to edit distance only");
  }
  if (o.w == 0) throw UsageError("--w must be at least 1");
  if (o.mod && problem != ps::Problem::convolution) throw UsageError("--mod applies to convolution only");

  ps::SymbolString fixed, stream;
  if (!o.fixed_path.empty() || !o.stream_path.empty()) {
    if (o.fixed_path.empty() || o.stream_path.empty()) throw UsageError("--fixed and --stream go together");
    fixed = read_symbols(o.fixed_path, o.input_format);
    stream = read_symbols(o.stream_path, o.input_format);
    if (fixed.empty()) throw UsageError("fixed string is empty");
  } else {
    if (o.n == 0) throw UsageError("--n must be positive");
    if (o.delta == 0 || o.delta > 16) throw UsageError("--delta must be in [1, 16]");
    ps::Rng rng(require_seed(o));
    fixed = ps::random_string(o.n, o.delta, rng);
    stream = ps::random_string(3 * o.n, o.delta, rng);
  }
  const std::optional<unsigned> modulus = o.mod ? std::optional<unsigned>(o.delta) : std::nullopt;

  ps::OutputSeries outputs;
  std::optional<ps::ProbeStats> probes;
  std::optional<ps::EngineCounters> counters;
  if (problem == ps::Problem::edit) {
    const ps::NormalizedProblem np = ps::normalize(fixed);
    ps::EngineOptions eo;
    eo.w = o.w;
    eo.variant = variant;
    eo.delta = ps::normalized_alphabet(np).delta();
    eo.charge_arrival = o.charge_arrival;
    eo.keep_log = !o.trace.empty();
    eo.track_minimizers = o.verify && variant != ps::Variant::naive;
    ps::OnlineEditEngine engine(np.fixed, eo);
    for (ps::Symbol s : np.remap.apply(stream)) {
      outputs.emplace_back(static_cast<ps::Wide>(engine.arrival(s)) - static_cast<ps::Wide>(np.offset));
    }
    probes = engine.memory().totals();
    counters = engine.counters();
    if (!o.trace.empty()) save_trace(engine.memory().log(), o.trace);
  } else {
    if (!o.trace.empty()) throw UsageError("--trace needs the edit engine");
    outputs = ps::solve_raw(problem, fixed, stream, modulus);
  }

  std::size_t mismatches = 0;
  if (o.verify) {
    if (problem == ps::Problem::edit) {
      const auto ref = ps::solve_raw(problem, fixed, stream);
      for (std::size_t k = 0; k < outputs.size(); ++k) mismatches += outputs[k] != ref[k];
      if (counters && counters->read_cap_violations) mismatches += counters->read_cap_violations;
    } else {
      // Independent per-window recomputation.
      const std::size_t n = fixed.size();
      for (std::size_t k = 0; k < outputs.size(); ++k) {
        std::optional<ps::Wide> ref;
        if (k + 1 >= n) {
          const ps::SymbolString win = stream.substr(k + 1 - n, n);
          switch (problem) {
            case ps::Problem::hamming: ref = static_cast<ps::Wide>(ps::hamming(fixed, win)); break;
            case ps::Problem::convolution:
              ref = modulus ? static_cast<ps::Wide>(ps::convolution_mod(fixed, win, *modulus)) : ps::convolution(fixed, win);
              break;
            case ps::Problem::lcs: ref = static_cast<ps::Wide>(ps::lcs(fixed, win)); break;
            case ps::Problem::edit: break;
          }
        }
        mismatches += outputs[k] != ref;
      }
    }
  }

  Sink sink(o.out);
  if (o.format == "json") {
    json doc;
    doc["problem"] = o.problem;
    doc["alg"] = problem == ps::Problem::edit ? o.alg : "naive";
    doc["n"] = fixed.size();
    doc["w"] = o.w;
    json ys = json::array();
    for (std::size_t k = 0; k < outputs.size(); ++k) {
      if (outputs[k]) ys.push_back({{"i", k}, {"y", wide(outputs[k])}});
    }
    doc["outputs"] = ys;
    if (probes) doc["probes"] = ps::to_json(*probes);
    if (o.verify) doc["mismatches"] = mismatches;
    sink.stream() << doc.dump(2) << '\n';
  } else {
    sink.stream() << "i,y\n";
    for (std::size_t k = 0; k < outputs.size(); ++k) {
      if (outputs[k]) sink.stream() << k << ',' << wide(outputs[k]) << '\n';
    }
    std::ostream& note = sink.is_stdout() ? std::cerr : std::cout;
    if (probes) {
      note << "probes=" << probes->probes << " reads=" << probes->reads << " writes=" << probes->writes
           << " bits_read=" << probes->bits_read << " bits_written=" << probes->bits_written << '\n';
    }
    if (o.verify) note << "mismatches=" << mismatches << '\n';
  }
  sink.finish();
  return mismatches == 0 ? kExitOk : kExitVerify;
}

int cmd_lemmas(const Options& o) {
  if (!ps::is_power_of_two(o.n) || o.n < 64) throw UsageError("--n must be a power of two >= 64");
  if (o.trials == 0) throw UsageError("--trials must be positive");
  const ps::LemmaReport rep = ps::lemma_trial_suite(o.n, o.trials, require_seed(o));
  const json summary = ps::to_json(rep.summary);
  Sink sink(o.out);
  if (o.format == "json") {
    json doc;
    doc["summary"] = summary;
    json recs = json::array();
    for (const auto& r : rep.records) {
      recs.push_back({{"trial", r.trial},
                      {"t", r.t},
                      {"lcs", r.lcs},
                      {"ham", r.ham},
                      {"min_edit", r.min_edit},
                      {"lcs_eq_n_minus_ham", r.lcs_eq_n_minus_ham},
                      {"balanced", r.balanced}});
    }
    doc["records"] = recs;
    sink.stream() << doc.dump(2) << '\n';
  } else {
    ps::write_lemma_csv(rep, sink.stream());
    (sink.is_stdout() ? std::cerr : std::cout) << summary.dump(2) << '\n';
  }
  sink.finish();
  return rep.summary.squeeze_violations == 0 ? kExitOk : kExitVerify;
}

int cmd_probes(const Options& o) {
  std::vector<std::size_t> ns = o.ns;
  if (ns.empty()) ns = {256, 512, 1024, 2048, 4096, 8192};
  for (std::size_t n : ns) {
    if (!ps::is_power_of_two(n) || n < 2) throw UsageError("--ns entries must be powers of two >= 2");
  }
  if (o.w == 0) throw UsageError("--w must be at least 1");
  const ps::Variant variant = ps::parse_variant(o.alg);
  const std::uint64_t seed = require_seed(o);
  std::vector<ps::ProbePoint> points;
  for (std::size_t n : ns) points.push_back(ps::measure_probes(n, o.w, variant, seed, o.delta, o.charge_arrival));
  Sink sink(o.out);
  if (o.format == "json") {
    json doc;
    json rows = json::array();
    for (const auto& p : points) rows.push_back(ps::to_json(p));
    doc["points"] = rows;
    if (points.size() >= 2) doc["fit"] = ps::to_json(ps::fit_log_squared(points));
    sink.stream() << doc.dump(2) << '\n';
  } else {
    sink.stream() << "n,w,alg,probes_per_arrival,reads_per_arrival,writes_per_arrival,bits_per_arrival,normalized\n";
    for (const auto& p : points) {
      sink.stream() << p.n << ',' << p.w << ',' << ps::to_string(p.variant) << ',' << p.probes << ',' << p.reads << ','
                    << p.writes << ',' << p.bits << ',' << p.normalized << '\n';
    }
    if (points.size() >= 2) {
      const ps::ScalingFit fit = ps::fit_log_squared(points);
      (sink.is_stdout() ? std::cerr : std::cout)
          << "fit c=" << fit.c << " max_deviation=" << fit.max_deviation << " exponent=" << fit.exponent << '\n';
    }
  }
  sink.finish();
  return kExitOk;
}

int cmd_itree(const Options& o) {
  if (!ps::is_power_of_two(o.n)) throw UsageError("--n must be a power of two");
  ps::AccessLog log;
  if (!o.trace.empty()) {
    log = load_trace(o.trace);
  } else {
    ps::Rng rng(require_seed(o));
    const ps::SymbolString fixed = ps::random_string(o.n, o.delta, rng);
    const ps::SymbolString stream = ps::random_string(3 * o.n, o.delta, rng);
    ps::EngineOptions eo;
    eo.w = o.w;
    eo.delta = o.delta;
    eo.variant = ps::parse_variant(o.alg);
    eo.charge_arrival = o.charge_arrival;
    ps::OnlineEditEngine engine(fixed, eo);
    for (ps::Symbol s : stream) engine.arrival(s);
    log = engine.memory().log();
  }
  const std::int64_t base = o.base.value_or(static_cast<std::int64_t>(2 * o.n));
  const ps::TransferReport rep = ps::transfer_report(log, o.n, base);
  Sink sink(o.out);
  sink.stream() << ps::to_json(rep).dump(2) << '\n';
  sink.finish();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probestream: cell-probe streaming pattern matching"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "Length of the fixed string");
    sub->add_option("--w", o.w, "Cell width in bits");
    sub->add_option("--delta", o.delta, "Bits per symbol for generated inputs");
    sub->add_option("--seed", o.seed, "Seed for generated inputs");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "Output file (default stdout)");
  };

  auto* run = app.add_subcommand("run", "Run one stream through an engine");
  add_common(run);
  run->add_option("--problem", o.problem, "edit, hamming, convolution or lcs")
      ->check(CLI::IsMember({"edit", "hamming", "convolution", "lcs"}));
  auto* run_alg = run->add_option("--alg", o.alg, "naive, alg1 or alg2")->check(CLI::IsMember({"naive", "alg1", "alg2"}));
  run->add_flag("--verify", o.verify, "Compare against the reference oracle");
  run->add_flag("--mod", o.mod, "Report convolution modulo 2^delta");
  run->add_flag("--charge-arrival", o.charge_arrival, "Charge a probe for reading the arriving symbol");
  run->add_option("--trace", o.trace, "Write the access log (.csv for text, otherwise binary)");
  run->add_option("--fixed", o.fixed_path, "File holding F");
  run->add_option("--stream", o.stream_path, "File holding S");
  run->add_option("--input-format", o.input_format, "bytes or ints")->check(CLI::IsMember({"bytes", "ints"}));

  auto* lemmas = app.add_subcommand("lemmas", "Monte Carlo lemma checks on the hard distribution");
  add_common(lemmas);
  lemmas->add_option("--trials", o.trials, "Number of sampled streams");

  auto* probes = app.add_subcommand("probes", "Amortized probes per arrival across n");
  add_common(probes);
  probes->add_option("--alg", o.alg, "naive, alg1 or alg2")->check(CLI::IsMember({"naive", "alg1", "alg2"}));
  probes->add_option("--ns", o.ns, "Values of n")->delimiter(',');
  probes->add_flag("--charge-arrival", o.charge_arrival, "Charge a probe for reading the arriving symbol");

  auto* itree = app.add_subcommand("itree", "Information-transfer report");
  add_common(itree);
  itree->add_option("--trace", o.trace, "Trace file from 'run --trace'");
  itree->add_option("--alg", o.alg, "Engine for an inline run")->check(CLI::IsMember({"naive", "alg1", "alg2"}));
  itree->add_option("--base", o.base, "Log arrival mapped to tree time 0 (default 2n)");
  itree->add_flag("--charge-arrival", o.charge_arrival, "Charge a probe for reading the arriving symbol");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    o.alg_given = run_alg->count() > 0;
    if (*run) return cmd_run(o);
    if (*lemmas) return cmd_lemmas(o);
    if (*probes) return cmd_probes(o);
    if (*itree) return cmd_itree(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerify;
  }
  return kExitUsage;
}
