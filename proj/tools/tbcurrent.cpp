#include <cstdio>
#include <exception>
#include <iostream>

#include "tbc/config.hpp"
#include "tbc/experiments.hpp"

int main(int argc, char** argv) {
  try {
    const tbc::RunConfig cfg = tbc::parse_config(argc, argv);
    const tbc::ResultTable table = tbc::run_experiment(cfg);
    tbc::write_output(table, cfg.format, tbc::resolve_output_path(cfg));
    if (cfg.experiment == tbc::Experiment::verify_all) {
      const std::string* ok = table.meta("all_passed");
      return (ok && *ok == "true") ? 0 : 1;
    }
    return 0;
  } catch (const tbc::HelpRequested& h) {
    std::cout << h.what();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "tbcurrent: " << e.what() << '\n';
    return 2;
  }
}
