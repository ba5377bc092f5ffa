// Copyright 2026 The anw Authors
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

// anw: command-line front end of libanw.
//
//   anw <command> --config PATH [--seed U64] [--out DIR] [--format csv|json]
//                 [--parallel N] [--deterministic]
//
// Exit status: 0 on success, 2 when `verify` fails certification, 1 on errors.

#include "anw/anw.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  int parallel = 1;
  bool deterministic = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Output defaults may come from the scenario's "output" block.
void output_defaults(const std::string& text, Flags& f) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return;
  const auto& cfg = j.contains("config") && j.contains("results") ? j.at("config") : j;
  if (!cfg.contains("output") || !cfg.at("output").is_object()) return;
  const auto& o = cfg.at("output");
  if (f.format.empty() && o.contains("format") && o.at("format").is_string())
    f.format = o.at("format").get<std::string>();
  if (f.out.empty() && o.contains("directory") && o.at("directory").is_string())
    f.out = o.at("directory").get<std::string>();
}

int run(const std::string& command, Flags f) {
  const std::string text = read_file(f.config);
  output_defaults(text, f);
  if (f.format.empty()) f.format = "json";
  if (f.format != "json" && f.format != "csv") {
    std::cerr << "anw: --format must be csv or json\n";
    return 1;
  }

  anw_run_options opt;
  anw_run_options_init(&opt);
  if (f.seed) {
    opt.seed = *f.seed;
    opt.has_seed = 1;
  }
  opt.threads = f.parallel;
  opt.deterministic = f.deterministic ? 1 : 0;

  anw_result* result = nullptr;
  if (anw_run(command.c_str(), text.c_str(), &opt, &result) != ANW_OK) {
    std::cerr << "anw " << command << ": " << anw_last_error() << '\n';
    return 1;
  }
  const char* body = nullptr;
  const anw_status s =
      f.format == "json" ? anw_result_json(result, 2, &body) : anw_result_csv(result, &body);
  anw_certification cert = ANW_CERT_NOT_APPLICABLE;
  anw_result_certification(result, &cert);
  if (s != ANW_OK) {
    std::cerr << "anw " << command << ": " << anw_last_error() << '\n';
    anw_result_free(result);
    return 1;
  }
  std::string content(body);
  if (f.format == "json") content += '\n';
  anw_result_free(result);

  if (f.out.empty()) {
    std::cout << content;
  } else {
    std::filesystem::create_directories(f.out);
    const auto path = std::filesystem::path(f.out) / (command + "." + f.format);
    std::ofstream o(path, std::ios::binary);
    if (!o || !(o << content)) {
      std::cerr << "anw: cannot write '" << path.string() << "'\n";
      return 1;
    }
    std::cout << path.string() << '\n';
  }
  if (cert == ANW_CERT_FAILED) std::cerr << "anw " << command << ": certification failed\n";
  return command == "verify" && cert == ANW_CERT_FAILED ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian simulation and entanglement synthesis in arrays of nonlinear waveguides"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(anw_version()));

  Flags flags;
  std::string chosen;
  const char* const* names = anw_commands();
  for (std::size_t i = 0; names[i]; ++i) {
    const std::string name = names[i];
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " scenario");
    sub->add_option("--config", flags.config, "scenario file (JSON)")->required();
    sub->add_option("--seed", flags.seed, "RNG seed, overrides optimizer.seed");
    sub->add_option("--out", flags.out, "output directory; stdout when omitted");
    sub->add_option("--format", flags.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--parallel", flags.parallel, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--deterministic", flags.deterministic, "serial evaluation");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    return run(chosen, flags);
  } catch (const std::exception& e) {
    std::cerr << "anw: " << e.what() << '\n';
    return 1;
  }
}
