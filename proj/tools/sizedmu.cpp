#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "sizedmu/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Initial algebras of finite set functors by size-indexed iteration"};
  std::string input = "-";
  std::string format = "text";
  sizedmu::Flags flags;
  app.add_option("script", input, "Script file, or - for stdin");
  app.add_option("--size", flags.size, "Default size for commands: nat or plump:<signature>");
  app.add_option("--budget", flags.budget, "Default stage budget")->check(CLI::NonNegativeNumber);
  app.add_option("--depth", flags.depth, "Default depth for enumerate")->check(CLI::NonNegativeNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", flags.seed, "Seed for sampled checks");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  std::string source;
  if (input == "-") {
    source.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(input, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot open " << input << "\n";
      return 1;
    }
    source.assign(std::istreambuf_iterator<char>(in), {});
  }

  if (flags.size != "nat" && flags.size.rfind("plump:", 0) != 0) {
    std::cerr << "error: --size must be nat or plump:<signature>\n";
    return 1;
  }

  sizedmu::RunResult r;
  try {
    r = sizedmu::run_source(source, flags);
  } catch (const sizedmu::Error& e) {
    r = {sizedmu::exit_code_for(e.kind()), sizedmu::error_json(e), sizedmu::error_text(e)};
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  std::cout << sizedmu::render(r, format);
  return r.exit_code;
}
