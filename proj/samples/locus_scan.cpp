// Searches homogeneous tori for minimal ones with constant contact angle and
// prints where they land relative to the circle locus.
//   locus_scan [denominator]

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "s5frames/catalog.hpp"

using namespace s5frames;

int main(int argc, char** argv) {
    const int denominator = argc > 1 ? std::atoi(argv[1]) : 12;
    if (denominator < 3) {
        std::fprintf(stderr, "denominator must be at least 3\n");
        return 2;
    }
    const auto radii = squared_radius_lattice(denominator);
    const std::vector<FrequencySet> freqs{{{{1, 0}, {0, 1}, {-1, 0}}},
                                          {{{1, 0}, {0, 1}, {1, -1}}},
                                          {{{1, 0}, {0, 1}, {-1, -1}}}};
    SearchOptions opt;
    opt.fine_n = 24;
    opt.workers = 4;
    const auto found = minimal_torus_search(radii, freqs, 1e-6, opt);

    std::printf("%-82s %10s %10s %10s %10s %12s\n", "chart", "beta", "alpha", "a", "b", "circle");
    for (const auto& c : found)
        std::printf("%-82s %10.6f %10.6f %10.6f %10.6f %12.3e\n", c.spec.name().c_str(), c.sample.beta,
                    c.sample.alpha, c.sample.a, c.sample.b, c.sample.circle_residual);
    std::printf("%zu minimal tori out of %zu radius triples\n", found.size(), radii.size());
}
