#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "newstrend/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"newstrend - news-headline market trend prediction pipeline"};
  app.require_subcommand(1);

  std::string config_path;

  CLI::App* validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("config", config_path, "config JSON path")->required();

  CLI::App* run = app.add_subcommand("run", "run the configured experiment grid");
  run->add_option("config", config_path, "config JSON path")->required();

  newstrend::InspectOptions inspect_options;
  std::string inspect_date;
  CLI::App* inspect = app.add_subcommand("inspect", "inspect vocab, windows or features");
  inspect->add_option("config", config_path, "config JSON path")->required();
  inspect->add_option("subcommand", inspect_options.subcommand, "vocab | windows | features")
      ->required();
  inspect->add_option("--date", inspect_date, "day to inspect (features)");
  inspect->add_option("--top", inspect_options.top, "terms to list (vocab)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (validate->parsed()) {
    return newstrend::cmd_validate(config_path, std::cout, std::cerr);
  }
  if (run->parsed()) {
    return newstrend::cmd_run(config_path, std::cout, std::cerr);
  }
  if (!inspect_date.empty()) inspect_options.date = inspect_date;
  return newstrend::cmd_inspect(config_path, inspect_options, std::cout, std::cerr);
}
