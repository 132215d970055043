#include <cstdio>
#include <cstdlib>
#include <string>

#include "jbif/verify.hpp"

int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "all";
  jbif::Verifier verifier;
  bool ok = true;
  for (const auto& r : verifier.run_suite(suite)) {
    std::printf("%s\n", jbif::format_result(r).c_str());
    std::fflush(stdout);
    ok = ok && r.passed;
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
