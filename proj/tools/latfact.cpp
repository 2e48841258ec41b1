#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latfact/latfact.hpp"

namespace {

using latfact::ojson;

struct InputPaths {
  std::string lattice;
  std::string domain;
  std::string table;
  std::string output;
};

void add_input_options(CLI::App* cmd, InputPaths& in) {
  cmd->add_option("--domain", in.domain, "domain spec JSON")->required();
  cmd->add_option("--table", in.table, "function table CSV")->required();
  cmd->add_option("--lattice", in.lattice, "lattice JSON (overrides the domain spec's lattice)");
  cmd->add_option("--output", in.output, "write the report here instead of stdout");
}

latfact::FunctionTable load_table(const InputPaths& in) {
  namespace fs = std::filesystem;
  ojson dj = latfact::io::load_json_file(in.domain);
  auto [domains, lat] = latfact::io::parse_domains(dj, fs::path(in.domain).parent_path());
  if (!in.lattice.empty()) lat = latfact::io::parse_lattice(latfact::io::load_json_file(in.lattice));
  if (!lat) throw latfact::error(latfact::errc::bad_input,
                                 "no lattice given (domain spec has none and --lattice not passed)");
  return latfact::io::parse_table_csv(latfact::io::load_text_file(in.table), domains, lat);
}

void emit(const ojson& report, const std::string& output) {
  if (output.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(output);
    if (!out) throw latfact::error(latfact::errc::bad_input, "cannot write '" + output + "'");
    out << report.dump(2) << "\n";
  }
}

int emit_error(const latfact::error& e, const std::string& output) {
  ojson rep;
  rep["schema"] = 1;
  rep["error"] = ojson{{"code", latfact::to_string(e.code())}, {"message", e.what()}};
  try {
    emit(rep, output);
  } catch (...) {
    std::cerr << rep.dump(2) << "\n";
  }
  return e.code() == latfact::errc::cap_exceeded ? 3 : 2;
}

latfact::PipelineOptions pipeline_options(const std::string& chain_mode, const std::string& bounds,
                                          std::size_t cap, bool count_only, bool strict) {
  latfact::PipelineOptions opts;
  opts.cap = cap;
  opts.count_only = count_only;
  opts.strict = strict;
  opts.chain_mode = chain_mode == "force"  ? latfact::ChainMode::force
                    : chain_mode == "off"  ? latfact::ChainMode::off
                                           : latfact::ChainMode::automatic;
  opts.bounds_mode =
      bounds == "explicit" ? latfact::BoundsMode::explicit_only : latfact::BoundsMode::automatic;
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factorization of lattice-valued tables through lattice polynomial functions"};
  app.require_subcommand(1);

  InputPaths in;
  std::string chain_mode = "auto";
  std::string bounds = "auto";
  std::size_t cap = 10000;
  bool count_only = false;
  bool strict = false;

  auto add_analysis_flags = [&](CLI::App* cmd) {
    cmd->add_option("--chain-mode", chain_mode, "auto|force|off")
        ->check(CLI::IsMember({"auto", "force", "off"}));
    cmd->add_option("--bounds", bounds, "auto|explicit designated-element handling")
        ->check(CLI::IsMember({"auto", "explicit"}));
  };

  CLI::App* check = app.add_subcommand("check", "decide whether the table can be factorized");
  add_input_options(check, in);
  add_analysis_flags(check);

  CLI::App* factorize = app.add_subcommand("factorize", "enumerate every factorization");
  add_input_options(factorize, in);
  add_analysis_flags(factorize);
  factorize->add_option("--max-factorizations", cap, "enumeration cap (default 10000)");
  factorize->add_flag("--count-only", count_only, "report counts without materializing");
  factorize->add_flag("--strict", strict, "exit 3 when the cap is hit");

  std::string fact_path;
  CLI::App* verify = app.add_subcommand("verify", "check one claimed factorization");
  add_input_options(verify, in);
  add_analysis_flags(verify);
  verify->add_option("--factorization", fact_path, "factorization JSON {\"phi\":..., \"p\":...}")
      ->required();

  std::string seeds = "1..100";
  std::uint64_t single_seed = 0;
  bool have_single_seed = false;
  std::string limits_str = "2,3,6";
  std::vector<std::string> lattice_args;
  std::string oc_output;
  CLI::App* oc = app.add_subcommand("oracle-compare",
                                    "cross-check the engine against brute force on random instances");
  oc->add_option("--seeds", seeds, "seed range A..B (default 1..100)");
  oc->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& v) { single_seed = v; have_single_seed = true; },
        "single seed (overrides --seeds)");
  oc->add_option("--limits", limits_str, "n,x,y = max arity, max domain size, max lattice size");
  oc->add_option("--lattice", lattice_args,
                 "builtin name (chainN, pow2, pow2top) or lattice JSON path; repeatable");
  oc->add_option("--output", oc_output, "write the summary here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (check->parsed() || factorize->parsed()) {
      auto table = load_table(in);
      auto opts = pipeline_options(chain_mode, bounds, cap, count_only, strict);
      auto res = latfact::run_analysis(table, opts, factorize->parsed());
      emit(res.report, in.output);
      return res.exit_code;
    }
    if (verify->parsed()) {
      auto table = load_table(in);
      ojson fj = latfact::io::load_json_file(fact_path);
      if (!fj.contains("phi") || !fj.contains("p"))
        throw latfact::error(latfact::errc::bad_input, "factorization JSON needs 'phi' and 'p'");
      auto phi = latfact::io::parse_phi(fj.at("phi"), table.domains(), table.lattice());
      auto p = latfact::io::parse_polynomial(fj.at("p"), table.codomain());
      auto opts = pipeline_options(chain_mode, bounds, cap, count_only, strict);
      auto res = latfact::run_verify(table, phi, p, opts);
      emit(res.report, in.output);
      return res.exit_code;
    }
    if (oc->parsed()) {
      std::uint64_t lo = 1, hi = 100;
      if (have_single_seed) {
        lo = hi = single_seed;
      } else {
        auto dots = seeds.find("..");
        if (dots == std::string::npos)
          throw latfact::error(latfact::errc::bad_input, "--seeds must look like A..B");
        lo = std::stoull(seeds.substr(0, dots));
        hi = std::stoull(seeds.substr(dots + 2));
        if (hi < lo) throw latfact::error(latfact::errc::bad_input, "--seeds range is empty");
      }
      latfact::InstanceLimits limits;
      {
        unsigned long a = 0, b = 0, c = 0;
        if (std::sscanf(limits_str.c_str(), "%lu,%lu,%lu", &a, &b, &c) != 3)
          throw latfact::error(latfact::errc::bad_input, "--limits must look like n,x,y");
        limits.max_arity = a;
        limits.max_domain = b;
        limits.max_lattice = c;
      }
      std::vector<std::pair<std::string, latfact::LatticePtr>> lattices;
      if (lattice_args.empty()) lattice_args = {"chain3", "chain4", "pow2", "pow2top"};
      for (const auto& arg : lattice_args) {
        if (arg.find('.') != std::string::npos && std::filesystem::exists(arg))
          lattices.emplace_back(arg, latfact::io::parse_lattice(latfact::io::load_json_file(arg)));
        else
          lattices.emplace_back(arg, latfact::builtin_lattice(arg));
      }
      ojson summary = latfact::run_oracle_compare(lattices, lo, hi, limits);
      emit(summary, oc_output);
      return summary.at("pass").get<bool>() ? 0 : 1;
    }
  } catch (const latfact::error& e) {
    return emit_error(e, oc->parsed() ? oc_output : in.output);
  } catch (const std::exception& e) {
    return emit_error(latfact::error(latfact::errc::bad_input, e.what()),
                      oc->parsed() ? oc_output : in.output);
  }
  return 2;
}
