#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "common.hpp"
#include "ttestab/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Swing-dynamics stability toolkit: polynomial surrogate models, "
               "stability-boundary searches and critical clearing times"};
  app.require_subcommand(1);
  cli::register_smib(app);
  cli::register_mm(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Flag problems are validation failures; --help/--version stay success.
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const ttestab::validation_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ttestab::numerical_error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
