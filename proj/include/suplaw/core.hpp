// Copyright 2026 The suplaw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace suplaw {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a request exceeds a configured size cap (permutation group
/// order, transversal size, grid volume).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised for malformed or inconsistent experiment configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a computed quantity violates a physical invariant beyond
/// floating-point residue (negative probability, unnormalized output).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::uint64_t factorial(int k) {
    if (k < 0 || k > 20) {
        throw std::out_of_range("factorial argument out of range: " + std::to_string(k));
    }
    std::uint64_t r = 1;
    for (int i = 2; i <= k; ++i) {
        r *= static_cast<std::uint64_t>(i);
    }
    return r;
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

/// Worker count used by the parallel pipeline. Reads SUPLAW_THREADS when set,
/// otherwise the hardware concurrency.
inline int default_thread_count() {
    if (const char *env = std::getenv("SUPLAW_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) {
            return v;
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; callers write into per-index slots and reduce in
/// index order afterwards, so results never depend on the worker count.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body &&body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (std::size_t i = next++; i < count && !failed; i = next++) {
                    body(i);
                }
            } catch (...) {
                if (!failed.exchange(true)) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace suplaw
