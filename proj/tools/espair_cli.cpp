// Command-line front door: loads models and functions, dispatches to the
// engines, and emits machine-readable certification reports.
//
// Exit codes: 0 ok, 2 a certified bound failed its tolerance, 1 error.
// The report JSON always goes to stdout (and to --out when given); the
// human-readable summary goes to stderr.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "espair/espair.hpp"

namespace {

using nlohmann::json;

// FNV-1a 64-bit over the command name and every input (file bytes for
// paths, canonical decimal rendering for numbers), NUL-separated.
class Digest {
 public:
  void add(const std::string& part) {
    for (unsigned char c : part) step(c);
    step(0);
  }
  void add_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    add(buf);
  }
  void add_u64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%" PRIu64, v);
    add(buf);
  }
  std::string hex() const {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h_);
    return buf;
  }

 private:
  void step(unsigned char c) {
    h_ ^= c;
    h_ *= 1099511628211ULL;
  }
  std::uint64_t h_ = 14695981039346656037ULL;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw espair::Error("read", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Report {
  std::string command;
  std::string digest;
  json payload;
  std::string status = "ok";  // ok | violated | error
};

int emit(const Report& r, const std::optional<std::string>& out_path,
         const std::string& summary) {
  const json doc{{"command", r.command},
                 {"inputs_digest", r.digest},
                 {"payload", r.payload},
                 {"status", r.status}};
  const std::string text = espair::dump_json_17(doc);
  std::cout << text << "\n";
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw espair::Error("write", "cannot open '" + *out_path + "'");
    out << text << "\n";
  }
  if (!summary.empty()) std::cerr << summary << "\n";
  if (r.status == "ok") return 0;
  if (r.status == "violated") return 2;
  return 1;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

espair::TestFunction parse_test_function(const std::string& text, int n) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw espair::Error("parse_test_function",
                        std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("builtin"))
    throw espair::Error("parse_test_function", "need {\"builtin\":..,\"params\":..}");
  std::vector<double> params;
  if (doc.contains("params"))
    for (const auto& v : doc.at("params")) params.push_back(v.get<double>());
  return espair::make_test_function(doc.at("builtin").get<std::string>(),
                                    params, n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verification of Efron-Stein-type inequalities for "
               "dependent coordinate pairs"};
  app.require_subcommand(1);

  std::string model_path, function_path;
  std::optional<std::string> out_path, sample_function_path, only_key;
  std::vector<int> k_values;
  int n = 1;
  double eps = 0.0, p = 0.5;
  std::uint64_t samples = 0, seed = 0;

  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "also write the report to this file");
  };

  auto* cmd_verify =
      app.add_subcommand("verify", "exact two-sided check of one model + function");
  cmd_verify->add_option("--model", model_path, "model JSON file")->required();
  cmd_verify->add_option("--function", function_path, "function JSON file")
      ->required();
  add_out(cmd_verify);

  auto* cmd_worst =
      app.add_subcommand("worst-case", "worst-case ratio over all functions");
  cmd_worst->add_option("--model", model_path, "model JSON file")->required();
  add_out(cmd_worst);

  auto* cmd_rho = app.add_subcommand("rho", "extremal constant rho(k)");
  cmd_rho->add_option("--k", k_values, "comma-separated support sizes")
      ->required()
      ->delimiter(',');
  add_out(cmd_rho);

  auto* cmd_decompose =
      app.add_subcommand("decompose", "cycle-flow decomposition per coordinate");
  cmd_decompose->add_option("--model", model_path, "model JSON file")->required();
  add_out(cmd_decompose);

  auto* cmd_counter =
      app.add_subcommand("counterexample", "the sharp counterexamples");
  cmd_counter->require_subcommand(1);
  auto* cmd_rotation = cmd_counter->add_subcommand(
      "rotation", "uniform rotation pairs, f = sin of the coordinate sum");
  cmd_rotation->add_option("--n", n, "number of coordinates")->required();
  cmd_rotation->add_option("--eps", eps, "rotation half-angle")->required();
  add_out(cmd_rotation);
  auto* cmd_threepoint = cmd_counter->add_subcommand(
      "threepoint", "three-point different-law model attaining the factor n");
  cmd_threepoint->add_option("--n", n, "number of coordinates")->required();
  add_out(cmd_threepoint);

  auto* cmd_sample = app.add_subcommand("sample", "seeded Monte Carlo estimates");
  cmd_sample->require_subcommand(1);
  auto* cmd_poincare = cmd_sample->add_subcommand(
      "poincare", "Gaussian sign-flipping Poincare inequality");
  cmd_poincare->add_option("--n", n, "number of coordinates")->required();
  cmd_poincare->add_option("--p", p, "P(B_i = 1)")->required();
  cmd_poincare->add_option("--samples", samples, "sample count")->required();
  cmd_poincare->add_option("--seed", seed, "PRNG seed")->required();
  cmd_poincare->add_option("--function", sample_function_path,
                           "test function JSON (default: linear, all ones)");
  add_out(cmd_poincare);
  auto* cmd_mc_rotation =
      cmd_sample->add_subcommand("rotation", "uniform rotation estimates");
  cmd_mc_rotation->add_option("--n", n, "number of coordinates")->required();
  cmd_mc_rotation->add_option("--eps", eps, "rotation half-angle")->required();
  cmd_mc_rotation->add_option("--samples", samples, "sample count")->required();
  cmd_mc_rotation->add_option("--seed", seed, "PRNG seed")->required();
  add_out(cmd_mc_rotation);

  auto* cmd_reproduce = app.add_subcommand(
      "reproduce", "run every certification and report one key per claim");
  cmd_reproduce->add_option("--only", only_key, "run a single key");
  cmd_reproduce->add_option(
      "--seed", seed, "PRNG seed (fixed default, never the clock)");
  add_out(cmd_reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cerr << app.help() << std::flush;
    return emit({"help", Digest().hex(), json::object(), "ok"}, std::nullopt, "");
  } catch (const CLI::ParseError& e) {
    Report r;
    r.command = argc > 1 ? argv[1] : "";
    r.digest = Digest().hex();
    r.payload = json{{"error", e.what()}};
    r.status = "error";
    return emit(r, std::nullopt, std::string("error: ") + e.what());
  }

  Report report;
  try {
    if (app.got_subcommand(cmd_verify)) {
      report.command = "verify";
      const std::string mtext = read_file(model_path);
      const std::string ftext = read_file(function_path);
      Digest d;
      d.add(report.command);
      d.add(mtext);
      d.add(ftext);
      report.digest = d.hex();
      const auto model = espair::parse_model(mtext);
      const auto f = espair::parse_function(ftext, model);
      const auto sides = espair::verify(model, f);
      report.payload = espair::sides_to_json(sides);
      report.status = sides.satisfied ? "ok" : "violated";
      return emit(report, out_path,
                  "verify: lhs " + fmt(sides.lhs) + ", rhs_sum " +
                      fmt(sides.rhs_sum) + ", bound " + fmt(sides.bound) +
                      (sides.satisfied ? " [ok]" : " [VIOLATED]"));
    }
    if (app.got_subcommand(cmd_worst)) {
      report.command = "worst-case";
      const std::string mtext = read_file(model_path);
      Digest d;
      d.add(report.command);
      d.add(mtext);
      report.digest = d.hex();
      const auto model = espair::parse_model(mtext);
      const auto res = espair::certify(model);
      report.payload = espair::certify_to_json(res, model.coordinates());
      report.status = res.pass ? "ok" : "violated";
      return emit(report, out_path,
                  "worst-case: lambda_max " + fmt(res.worst.lambda_max) +
                      ", tightest bound " + fmt(res.tightest_bound) +
                      (res.pass ? " [ok]" : " [VIOLATED]"));
    }
    if (app.got_subcommand(cmd_rho)) {
      report.command = "rho";
      Digest d;
      d.add(report.command);
      for (int ki : k_values) d.add_u64(std::uint64_t(ki));
      report.digest = d.hex();
      const auto res = espair::rho(k_values);
      report.payload = espair::rho_to_json(res);
      const bool lemma_ok = res.rho <= res.kappa_half_bound + 1e-12;
      report.payload["lemma_holds"] = lemma_ok;
      report.status = lemma_ok ? "ok" : "violated";
      return emit(report, out_path,
                  "rho: " + fmt(res.rho) + " <= max k/2 = " +
                      fmt(res.kappa_half_bound));
    }
    if (app.got_subcommand(cmd_decompose)) {
      report.command = "decompose";
      const std::string mtext = read_file(model_path);
      Digest d;
      d.add(report.command);
      d.add(mtext);
      report.digest = d.hex();
      const auto model = espair::parse_model(mtext);
      json pairs = json::array();
      int max_len = 1;
      for (const auto& pair : model.pairs) {
        const auto dec = espair::decompose_cycles(pair);
        max_len = std::max(max_len, dec.max_cycle_length);
        pairs.push_back(espair::decomposition_to_json(dec));
      }
      report.payload = json{{"pairs", std::move(pairs)},
                            {"max_cycle_length", max_len},
                            {"refined_constant", std::max(1.0, max_len / 2.0)}};
      return emit(report, out_path,
                  "decompose: refined constant " +
                      fmt(std::max(1.0, max_len / 2.0)));
    }
    if (app.got_subcommand(cmd_counter)) {
      if (cmd_counter->got_subcommand(cmd_rotation)) {
        report.command = "counterexample rotation";
        Digest d;
        d.add(report.command);
        d.add_u64(std::uint64_t(n));
        d.add_double(eps);
        report.digest = d.hex();
        const double ratio = espair::rotation_ratio(n, eps);
        const double sn = std::sin(n * eps), s1 = std::sin(eps);
        const bool cs_ok = ratio <= double(n) + 1e-12;
        report.payload = json{{"n", n},
                              {"eps", eps},
                              {"ratio", ratio},
                              {"limit", n},
                              {"closed_form_lhs", 2.0 * sn * sn},
                              {"closed_form_rhs_term", 2.0 * s1 * s1},
                              {"cauchy_schwarz_ok", cs_ok}};
        report.status = cs_ok ? "ok" : "violated";
        return emit(report, out_path,
                    "rotation: ratio " + fmt(ratio) + " -> n = " + fmt(n) +
                        " as eps -> 0");
      }
      report.command = "counterexample threepoint";
      Digest d;
      d.add(report.command);
      d.add_u64(std::uint64_t(n));
      report.digest = d.hex();
      const auto model = espair::three_point_different_law(n);
      const auto sides = espair::verify(model, espair::product_sign_table(model));
      const auto cert = espair::certify(model);
      const bool attains =
          std::abs(cert.worst.lambda_max - n) <= espair::kEigenTolerance;
      report.payload = json{{"n", n},
                            {"sides", espair::sides_to_json(sides)},
                            {"lambda_max", cert.worst.lambda_max},
                            {"attains_n", attains}};
      report.status = (sides.satisfied && cert.pass) ? "ok" : "violated";
      return emit(report, out_path,
                  "threepoint: lhs " + fmt(sides.lhs) + " = n^2, rhs_sum " +
                      fmt(sides.rhs_sum) + " = n, lambda_max " +
                      fmt(cert.worst.lambda_max));
    }
    if (app.got_subcommand(cmd_sample)) {
      if (cmd_sample->got_subcommand(cmd_poincare)) {
        report.command = "sample poincare";
        espair::SignFlipConfig cfg;
        cfg.n = n;
        cfg.p = p;
        cfg.samples = samples;
        cfg.seed = seed;
        std::string ftext;
        if (sample_function_path) {
          ftext = read_file(*sample_function_path);
          cfg.function = parse_test_function(ftext, n);
        } else {
          cfg.function = espair::make_test_function(
              "linear", std::vector<double>(std::size_t(n), 1.0), n);
        }
        Digest d;
        d.add(report.command);
        d.add_u64(std::uint64_t(n));
        d.add_double(p);
        d.add_u64(samples);
        d.add_u64(seed);
        d.add(ftext);
        report.digest = d.hex();
        const auto rep = espair::estimate_sign_flip_sides(cfg);
        report.payload = espair::sign_flip_to_json(rep, cfg);
        report.status = rep.bound_holds ? "ok" : "violated";
        return emit(report, out_path,
                    "poincare: lhs " + fmt(rep.lhs.mean) + " <= rhs " +
                        fmt(rep.poincare_rhs.mean) +
                        (rep.bound_holds ? " [ok]" : " [VIOLATED]"));
      }
      report.command = "sample rotation";
      Digest d;
      d.add(report.command);
      d.add_u64(std::uint64_t(n));
      d.add_double(eps);
      d.add_u64(samples);
      d.add_u64(seed);
      report.digest = d.hex();
      const auto rep = espair::estimate_rotation_sides(n, eps, samples, seed);
      report.payload = espair::rotation_to_json(rep, seed, samples);
      const bool consistent = report.payload.at("consistent").get<bool>();
      report.status = consistent ? "ok" : "violated";
      return emit(report, out_path,
                  "rotation: lhs " + fmt(rep.lhs.mean) + " vs closed form " +
                      fmt(rep.closed_form_lhs));
    }
    // reproduce
    report.command = "reproduce";
    espair::ReproduceOptions opt;
    if (cmd_reproduce->count("--seed")) opt.seed = seed;
    opt.only = only_key;
    Digest d;
    d.add(report.command);
    d.add_u64(opt.seed);
    if (opt.only) d.add(*opt.only);
    report.digest = d.hex();
    const auto rep = espair::run_reproduce(opt);
    report.payload = espair::reproduce_to_json(rep);
    report.status = rep.all_passed ? "ok" : "violated";
    std::string summary;
    for (const auto& c : rep.checks)
      summary += (c.passed ? "PASS " : "FAIL ") + c.key + ": " + c.detail + "\n";
    summary += rep.all_passed ? "reproduce: all keys passed"
                              : "reproduce: some keys FAILED";
    return emit(report, out_path, summary);
  } catch (const std::exception& e) {
    report.payload = json{{"error", e.what()}};
    report.status = "error";
    if (report.digest.empty()) report.digest = Digest().hex();
    if (report.command.empty()) report.command = argc > 1 ? argv[1] : "";
    return emit(report, out_path, std::string("error: ") + e.what());
  }
}
