// Acceptance gate: one line per criterion, non-zero exit if any fails.
//   acceptance            all criteria
//   acceptance --only 3   a single criterion

#include "tdho/verify.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>

int main(int argc, char** argv)
{
    using namespace tdho::verify;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--only N]\n";
            return 2;
        }
    }
    AcceptanceSuite suite;
    int failed = 0;
    for (int id = 1; id <= AcceptanceSuite::kCriteria; ++id) {
        if (only != 0 && id != only) {
            continue;
        }
        const CheckResult r = suite.run(id);
        failed += r.pass ? 0 : 1;
        std::cout << format_result(r) << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
