#include "lsg/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

// One line per criterion on stdout; exit status 1 if any criterion fails.
int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  const auto results = lsg::run_acceptance(seed);
  bool all = true;
  for (const auto& r : results) {
    std::cout << lsg::status_line(r) << '\n';
    std::cerr << "criterion " << r.id << " seconds=" << r.seconds << '\n';
    all = all && r.pass;
  }
  std::cout << (all ? "acceptance: all criteria pass" : "acceptance: FAILURES") << std::endl;
  return all ? 0 : 1;
}
