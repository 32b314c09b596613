// Runs every acceptance criterion and prints one pass/fail line each.

#include "conelab/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <thread>

int main() {
    std::uint64_t seed = 2024;
    if (const char* env = std::getenv("CONELAB_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') seed = v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    const int threads = hw > 0 ? static_cast<int>(hw) : 1;
    const auto results = conelab::run_acceptance(std::cout, seed, threads);
    return conelab::acceptance_passed(results) ? 0 : 1;
}
