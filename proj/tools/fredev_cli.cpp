#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fredev/commands.hpp"
#include "fredev/config.hpp"
#include "fredev/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int report(const std::string& kind, const std::string& message, int code) {
  std::cerr << fredev::commands::render_error(kind, message);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fredholm determinants and Evans functions for travelling-wave eigenvalue problems", "fredev"};
  app.set_version_flag("--version", fredev::commands::version());

  std::string command, config_path, output_path, format;
  std::vector<std::string> overrides;
  int threads = -1;
  app.add_option("command", command, "roots | det | evans | compare | locate | scan | converge")
      ->required()
      ->check(CLI::IsMember(fredev::commands::command_names()));
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--output", output_path, "write the result here instead of stdout");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads (0 = available parallelism)")->check(CLI::NonNegativeNumber);
  app.add_option("--override", overrides, "key.path=value, applied after the config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("config", e.what(), kExitConfig);
  }

  try {
    fredev::config::json doc = config_path.empty() ? fredev::config::json::object() : fredev::config::read_file(config_path);
    for (const auto& o : overrides) fredev::config::apply_override(doc, o);
    if (!format.empty()) fredev::config::apply_override(doc, "output.format=\"" + format + "\"");
    if (threads >= 0) fredev::config::apply_override(doc, "threads=" + std::to_string(threads));
    const fredev::config::RunConfig cfg = fredev::config::resolve(doc);
    const std::string text = fredev::commands::render(fredev::commands::run(command, cfg), cfg);
    if (output_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(output_path, std::ios::binary);
      if (!out) return report("config", "cannot write '" + output_path + "'", kExitConfig);
      out << text;
    }
  } catch (const fredev::Error& e) {
    return report(fredev::to_string(e.kind()), e.what(), e.is_config() ? kExitConfig : kExitNumeric);
  } catch (const std::exception& e) {
    return report("internal", e.what(), 1);
  }
  return 0;
}
