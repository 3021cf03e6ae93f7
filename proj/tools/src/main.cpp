// rip: robust pricing and hedging reports from a model file.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rip/cli/commands.hpp"
#include "rip/errors.hpp"

namespace {

int emit(const nlohmann::ordered_json& doc, const std::string& out_path) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 1;
  }
  out << text;
  return 0;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const rip::ParseError*>(&e)) return "parse";
  if (dynamic_cast<const rip::PreconditionError*>(&e)) return "precondition";
  if (dynamic_cast<const rip::DomainError*>(&e)) return "domain";
  if (dynamic_cast<const rip::DimensionError*>(&e)) return "dimension";
  if (dynamic_cast<const rip::CapacityError*>(&e)) return "capacity";
  if (dynamic_cast<const rip::EvalError*>(&e)) return "evaluation";
  if (dynamic_cast<const rip::IncompatibleGridError*>(&e)) return "grid";
  if (dynamic_cast<const rip::InternalConsistencyError*>(&e)) return "internal";
  return "error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust superhedging costs and model prices on finite path spaces"};
  std::string command;
  std::string model_path;
  std::string out_path;
  std::string mode;
  int t1 = -1;
  std::string atom;
  bool timings = false;

  app.add_option("command", command, "price | hedge | duality | dpp | info-value | chain")
      ->required()
      ->check(CLI::IsMember(rip::cli::command_names()));
  app.add_option("--model", model_path, "model file (JSON)")->required();
  app.add_option("--t1", t1, "arrival index of the information");
  app.add_option("--atom", atom, "restrict to paths with this information label");
  app.add_option("--mode", mode, "numeric mode")->check(CLI::IsMember({"rational", "float"}));
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_flag("--timings", timings, "add wall-clock timings to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rip::cli::kExitError;
  }

  const rip::cli::ParsedModel parsed = rip::cli::parse_model(model_path);
  if (!parsed.ok()) {
    emit(rip::cli::error_report(command, "model", parsed.errors), out_path);
    return rip::cli::kExitError;
  }

  rip::cli::RunOptions options;
  if (app.count("--t1")) options.t1 = t1;
  if (app.count("--atom")) options.atom = atom;
  if (!mode.empty()) options.mode = mode == "float" ? rip::NumericMode::kFloat : rip::NumericMode::kRational;
  options.timings = timings;

  try {
    const rip::cli::Report report = rip::cli::run(command, *parsed.config, options);
    if (emit(report.body, out_path) != 0) return rip::cli::kExitError;
    return report.exit_code;
  } catch (const std::exception& e) {
    emit(rip::cli::error_report(command, error_kind(e), {e.what()}), out_path);
    return rip::cli::kExitError;
  }
}
