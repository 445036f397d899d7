// spectra_lab: command line front end. Every subcommand takes --config FILE plus one flag
// per config key (underscores become dashes); flags override the file.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "spectra_lab/reports/run.hpp"

namespace {

using spectra_lab::json;

std::string flag_name(std::string key) {
  for (char& c : key)
    if (c == '_') c = '-';
  return "--" + key;
}

struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> flags;  // key -> raw flag text, filled by CLI11
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error("config " + path + " is not valid JSON");
  return j;
}

int execute(const std::string& name, Command& cmd) {
  json raw = json::object();
  if (!cmd.config_path.empty()) raw = load_config(cmd.config_path);
  if (!raw.is_object()) throw spectra_lab::ConfigError("$", "config must be a JSON object");
  if (raw.contains("command") && raw["command"] != name)
    throw spectra_lab::ConfigError("command", "config file is for '" + raw["command"].dump() + "', not '" + name + "'");
  raw["command"] = name;
  for (const auto& key : spectra_lab::command_keys(name)) {
    auto it = cmd.flags.find(key.name);
    if (it != cmd.flags.end() && cmd.app->count(flag_name(key.name)) > 0)
      raw[key.name] = spectra_lab::flag_value(key, it->second);
  }
  auto config = spectra_lab::ExperimentConfig::from_json(raw);
  auto report = spectra_lab::run(config);
  std::cout << spectra_lab::write_outputs(config, report);
  if (report.exit_code() == spectra_lab::kExitCertificateFailed)
    std::cerr << "certificate failed (see report status)\n";
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical Markov and Lagrange spectra, Cantor-set geometry and model systems"};
  app.set_version_flag("--version", std::string("spectra_lab ") + SPECTRA_LAB_VERSION);
  app.require_subcommand(1);
  std::map<std::string, Command> commands;
  for (const auto& name : spectra_lab::command_names()) {
    Command& cmd = commands[name];
    cmd.app = app.add_subcommand(name, "run the " + name + " experiment");
    cmd.app->add_option("--config", cmd.config_path, "JSON config file")->check(CLI::ExistingFile);
    for (const auto& key : spectra_lab::command_keys(name)) {
      if (key.name == "command") continue;
      cmd.app->add_option(flag_name(key.name), cmd.flags[key.name], key.help);
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : spectra_lab::kExitError;
  }
  for (auto& [name, cmd] : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      return execute(name, cmd);
    } catch (const spectra_lab::ConfigError& e) {
      std::cerr << "invalid config:\n";
      for (const auto& err : e.errors()) std::cerr << "  " << err.path << ": " << err.message << "\n";
      return spectra_lab::kExitError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return spectra_lab::kExitError;
    }
  }
  return spectra_lab::kExitError;
}
