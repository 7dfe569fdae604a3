// Runs the 13 acceptance criteria; exit status 0 iff all pass.
#include <cstdio>
#include <iostream>
#include <string>

#include "tflab/acceptance.hpp"
#include "tflab/json_util.hpp"

int main(int argc, char** argv) {
    std::string out;
    if (argc > 1) out = argv[1];
    tflab::AcceptanceOptions opt;
    opt.on_result = [](const tflab::CriterionResult& r) {
        std::cout << tflab::format_line(r) << std::endl;
        std::fprintf(stderr, "  (%d: %.1f s)\n", r.id, r.seconds);
    };
    const auto results = tflab::run_acceptance(opt);
    int failed = 0;
    for (const auto& r : results) failed += !r.pass;
    if (!out.empty()) tflab::write_text_file(out, tflab::canonical_dump(tflab::acceptance_json(results)));
    std::cout << results.size() - std::size_t(failed) << "/" << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
