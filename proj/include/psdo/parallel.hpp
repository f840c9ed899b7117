#pragma once

#include <cstddef>
#include <functional>

namespace psdo::par {

// Runtime switch between the OpenMP kernels and the serial reference path.
// Defaults to parallel; the test suite and the benchmark drive both.
bool enabled();
void set_enabled(bool on);
int max_threads();

// independent iterations writing to disjoint slots
void for_index(std::size_t n, const std::function<void(std::size_t)>& f);
void for_index_serial(std::size_t n, const std::function<void(std::size_t)>& f);

// max-reduction; order-independent, hence identical on both paths
double max_index(std::size_t n, const std::function<double(std::size_t)>& f);
double max_index_serial(std::size_t n,
                        const std::function<double(std::size_t)>& f);

}  // namespace psdo::par
