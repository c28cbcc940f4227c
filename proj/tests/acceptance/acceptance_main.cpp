#include <iostream>

#include "nsclab/acceptance.hpp"
#include "nsclab/config.hpp"

int main(int argc, char** argv) {
  nsclab::ExperimentConfig cfg;
  try {
    if (argc > 1) cfg = nsclab::load_config(argv[1]);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  const auto rep = nsclab::run_acceptance_suite(cfg);
  int passed = 0;
  for (const auto& r : rep.criteria) {
    std::cout << nsclab::summary_line(r) << '\n';
    passed += r.pass ? 1 : 0;
  }
  std::cout << passed << '/' << rep.criteria.size() << " criteria passed\n";
  return rep.pass() ? 0 : 1;
}
