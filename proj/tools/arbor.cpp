#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "arbor/cli.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw arbor::ParseError("cannot read " + path, "--config");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw arbor::ParseError("cannot write " + path, path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact ramification of arboreal representations of rational maps"};
  app.set_version_flag("--version", arbor::cli::kToolVersion);
  std::string command, config, dot, json;
  arbor::cli::Overrides ov;
  app.add_option("command", command, "pcf | portrait | branch | scan | gcr | height | newton | sparseness")
      ->required()
      ->check(CLI::IsMember(arbor::cli::commands()));
  app.add_option("--config", config, "problem file (JSON)")->required();
  auto* prime = app.add_option("--prime", ov.prime, "rational prime p");
  app.add_option("--p-max", ov.p_max, "scan bound")->excludes(prime);
  app.add_option("--depth", ov.depth, "depth N");
  app.add_option("--base", ov.base, "base point, e.g. 5 - t or [\"5\",\"-1\"]");
  app.add_option("--policy", ov.policy, "nearest-cycle | farthest | all");
  app.add_option("--dot", dot, "write the portrait as DOT");
  app.add_option("--json", json, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (!dot.empty() && command != "portrait")
      throw arbor::ParseError("--dot applies to the portrait command only", "--dot");
    auto cfg = arbor::cli::parse_config(slurp(config));
    auto rr = arbor::cli::run(command, cfg, ov);
    if (!dot.empty()) emit(dot, rr.dot);
    emit(json, rr.json);
    return 0;
  } catch (const arbor::ParseError& e) {
    std::cerr << arbor::cli::error_json(e.kind(), e.what(), e.path());
    return e.exit_code();
  } catch (const arbor::Error& e) {
    std::cerr << arbor::cli::error_json(e.kind(), e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << arbor::cli::error_json("internal", e.what());
    return 1;
  }
}
