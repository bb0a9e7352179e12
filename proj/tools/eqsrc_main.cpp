#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eqsrc/errors.hpp"
#include "eqsrc/job.hpp"

namespace {

int run_command(const std::string& command, const std::string& spec_path,
                const std::string& out_path, const std::string& format) {
  std::ifstream in(spec_path);
  if (!in) {
    std::cerr << "schema-error: cannot read spec file " << spec_path << "\n";
    return 2;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  eqsrc::JobSpec job = eqsrc::validate_schema(ss.str());
  if (job.command != command)
    eqsrc::fail("schema-error", "spec command '" + job.command +
                                    "' does not match subcommand '" + command + "'");
  if (!out_path.empty()) job.output_path = out_path;
  if (!format.empty()) {
    if (format != "csv" && format != "json")
      eqsrc::fail("schema-error", "--format expects csv or json");
    job.format = format;
  }
  return eqsrc::run(job);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilibrium measures and multiple orthogonal polynomial "
               "asymptotics for the equispaced external source model"};
  app.require_subcommand(1);

  std::string spec_path, out_path, format;
  for (const char* name : {"equilibrium", "density", "asymptotics",
                           "oracle-compare", "convergence-report"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--spec", spec_path, "job spec JSON file")->required();
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--format", format, "csv | json");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run_command(app.get_subcommands().front()->get_name(), spec_path,
                       out_path, format);
  } catch (const eqsrc::Error& e) {
    std::cerr << e.what() << "\n";
    return e.name() == "schema-error" ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
