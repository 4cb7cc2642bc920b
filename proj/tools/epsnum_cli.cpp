// Command-line front end for the epsnum shared library. Parses run
// configurations, executes one command per process, and persists a
// reproducible run record (JSON, optionally CSV).

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "epsnum/epsnum.h"
#include "json.hpp"

using nlohmann::json;

namespace {

int exit_code_for(eps_status st) {
  switch (st) {
    case EPS_OK:
      return 0;
    case EPS_ERR_CONFIG:
    case EPS_ERR_INVALID:
      return 2;
    case EPS_ERR_CAPABILITY:
    case EPS_ERR_BUDGET:
      return 3;
    case EPS_ERR_NUMERIC:
      return 4;
  }
  return 2;
}

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json parse_int_list(const std::string& s) {
  json arr = json::array();
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    arr.push_back(std::stoll(part));
  }
  return arr;
}

std::string join_methods(const json& bracket) {
  std::string out;
  if (bracket.contains("methods"))
    for (const auto& m : bracket.at("methods")) {
      if (!out.empty()) out += "+";
      out += m.get<std::string>();
    }
  return out;
}

std::string to_csv(const std::string& command, const json& payload, const json& metrics) {
  std::ostringstream csv;
  csv.precision(17);
  if (command == "converge") {
    csv << "n,lower,upper,eta,method,wall_ms\n";
    const auto& rows = payload.at("rows");
    const auto& walls = metrics.at("row_wall_ms");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& b = rows[i].at("bracket");
      csv << rows[i].at("size").get<int>() << "," << b.at("lower").get<double>() << ","
          << b.at("upper").get<double>() << "," << b.at("eta").get<double>() << ","
          << join_methods(b) << "," << walls[i].get<double>() << "\n";
    }
  } else if (command == "estimate") {
    csv << "n,lower,upper,eta,method,wall_ms\n";
    const auto& b = payload.at("bracket");
    csv << b.at("n").get<int>() << "," << b.at("lower").get<double>() << ","
        << b.at("upper").get<double>() << "," << b.at("eta").get<double>() << ","
        << join_methods(b) << "," << metrics.at("wall_ms").get<double>() << "\n";
  } else if (command == "bounds") {
    csv << "n,delta,attained_k,sandwich_lower,sandwich_upper\n";
    for (const auto& row : payload.at("rows")) {
      const auto& ak = row.at("attained_k");
      csv << row.at("n").get<int>() << "," << row.at("delta").get<double>() << ","
          << (ak.is_string() ? ak.get<std::string>() : std::to_string(ak.get<int>())) << ","
          << row.at("sandwich").at("lower").get<double>() << ","
          << row.at("sandwich").at("upper").get<double>() << "\n";
    }
  } else {
    throw CLI::ValidationError("--format csv supports bounds, estimate and converge");
  }
  return csv.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified entropy-number brackets for operators on l_p spaces"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "json";
  std::string eta_s, effort, sizes_s, ns_s, suites_s;
  long long seed = -1, k_arg = -1, n_max = -1, count = -1, node_budget = -1;
  bool no_witnesses = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration file (key = value lines)");
    sub->add_option("--out", out_path, "write the JSON run record here (default: stdout)");
    sub->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--eta", eta_s, "target density for the covering oracle");
    sub->add_option("--effort", effort, "greedy|exact")
        ->check(CLI::IsMember({"greedy", "exact"}));
    sub->add_option("--seed", seed, "seed recorded and used for randomized runs");
    sub->add_option("--node-budget", node_budget, "search node budget for exact refinement");
    sub->add_flag("--no-witnesses", no_witnesses, "omit witnesses from the payload");
  };

  CLI::App* c_bounds = app.add_subcommand("bounds", "closed-form diagonal bounds table");
  add_common(c_bounds);
  c_bounds->add_option("--n", ns_s, "ball budgets, comma separated");

  CLI::App* c_estimate = app.add_subcommand("estimate", "entropy bracket for one operator");
  add_common(c_estimate);
  c_estimate->add_option("--n", ns_s, "ball budget");

  CLI::App* c_converge = app.add_subcommand("converge", "truncation convergence record");
  add_common(c_converge);
  c_converge->add_option("--k", k_arg, "ball budget k");
  c_converge->add_option("--sizes", sizes_s, "truncation sizes, comma separated");

  CLI::App* c_hilbert = app.add_subcommand("hilbert", "adjoint/modulus identity report");
  add_common(c_hilbert);
  c_hilbert->add_option("--n-max", n_max, "largest ball budget checked");
  c_hilbert->add_option("--count", count, "number of random matrices");

  CLI::App* c_props = app.add_subcommand("props", "invariant suites");
  add_common(c_props);
  c_props->add_option("--suites", suites_s, "suite names, comma separated");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();

  const auto t0 = std::chrono::steady_clock::now();
  json cfg = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config file '" << config_path << "'\n";
      return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    char* parsed = nullptr;
    const eps_status st = eps_config_parse(buf.str().c_str(), &parsed);
    if (st != EPS_OK) {
      std::cerr << "error: " << eps_last_error() << "\n";
      return exit_code_for(st);
    }
    cfg = json::parse(parsed);
    eps_string_free(parsed);
  }

  // Flag overrides.
  try {
    if (!eta_s.empty()) cfg["eta"] = std::stod(eta_s);
    if (!effort.empty()) cfg["effort"] = effort;
    if (seed >= 0) cfg["seed"] = seed;
    if (node_budget >= 0) cfg["node_budget"] = node_budget;
    if (no_witnesses) cfg["witnesses"] = false;
    if (!ns_s.empty()) {
      const json arr = parse_int_list(ns_s);
      cfg["n"] = arr.size() == 1 ? arr[0] : arr;
    }
    if (k_arg >= 0) cfg["k"] = k_arg;
    if (!sizes_s.empty()) cfg["sizes"] = parse_int_list(sizes_s);
    if (n_max >= 0) cfg["n_max"] = n_max;
    if (count >= 0) cfg["count"] = count;
    if (command == "props" && sub->count("--suites") > 0)
      cfg["suites"] = suites_s;  // an explicitly empty selection must error
  } catch (const std::exception& e) {
    std::cerr << "error: bad flag value: " << e.what() << "\n";
    return 2;
  }

  char* result = nullptr;
  const eps_status st = eps_run_command(command.c_str(), cfg.dump().c_str(), &result);
  if (st != EPS_OK) {
    std::cerr << "error: " << eps_last_error() << "\n";
    return exit_code_for(st);
  }
  json wrapped = json::parse(result);
  eps_string_free(result);

  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  json record{{"command", command},
              {"version", eps_version()},
              {"seed", cfg.contains("seed") ? cfg.at("seed") : json(0)},
              {"config", cfg},
              {"payload", wrapped.at("payload")},
              {"metrics", wrapped.at("metrics")},
              {"timestamp_utc", iso_utc_now()},
              {"wall_ms", wall_ms}};

  std::string text;
  if (format == "csv") {
    try {
      text = to_csv(command, wrapped.at("payload"), wrapped.at("metrics"));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  } else {
    text = record.dump(2) + "\n";
  }

  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 2;
    }
    out << text;
  }
  return 0;
}
