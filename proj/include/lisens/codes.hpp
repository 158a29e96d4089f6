// -*-c++-*---------------------------------------------------------------------------------------
// Copyright 2026 The lisens authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LISENS_CODES_HPP
#define LISENS_CODES_HPP

#include <algorithm>
#include <bit>
#include <limits>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lisens/error.hpp"
#include "lisens/types.hpp"

namespace lisens
{
inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Entry (r, c) of the Sylvester Hadamard matrix of any power-of-two order.
inline int sylvester_entry(std::uint32_t r, std::uint32_t c)
{
  return (std::popcount(r & c) & 1) ? -1 : 1;
}

/// Sylvester Hadamard matrix H with H * H^T = order * I.
inline Eigen::MatrixXd hadamard(std::size_t order)
{
  require(
    is_power_of_two(order), ErrorKind::invalid_argument,
    "hadamard order must be a power of two, got " + std::to_string(order));
  Eigen::MatrixXd h(order, order);
  for (std::size_t r = 0; r < order; ++r) {
    for (std::size_t c = 0; c < order; ++c) {
      h(r, c) = sylvester_entry(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c));
    }
  }
  return h;
}

namespace detail
{
// Unbiased draw in [0, bound) from the raw engine output. std::uniform_int_distribution is
// implementation defined, which would make schedules differ across standard libraries.
inline std::uint64_t bounded(std::mt19937_64 & rng, std::uint64_t bound)
{
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

template <class It>
void fisher_yates(It first, It last, std::mt19937_64 & rng)
{
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    std::iter_swap(first + (i - 1), first + bounded(rng, i));
  }
}
}  // namespace detail

/// Time-ordered list of DMD column codes. Slot t displays the rank-one pattern 1 * phi_t^T
/// where phi_t is the 0/1 image of a row of a column-permuted Hadamard matrix, or the all-ones
/// vector on mean-tracking slots.
class PatternSchedule
{
public:
  PatternSchedule() = default;

  /// Assemble from explicit parts (used by the deserializer). Checks every invariant.
  PatternSchedule(
    std::size_t order, std::uint64_t seed, std::size_t mean_track_period,
    std::vector<std::uint32_t> permutation, std::vector<std::uint32_t> row_order,
    std::vector<std::int32_t> slot_rows)
  : order_(order),
    seed_(seed),
    period_(mean_track_period),
    permutation_(std::move(permutation)),
    row_order_(std::move(row_order)),
    slot_rows_(std::move(slot_rows))
  {
    require(is_power_of_two(order_), ErrorKind::invalid_argument, "schedule order must be a power of two");
    require(!slot_rows_.empty(), ErrorKind::invalid_argument, "schedule must contain at least one slot");
    require(is_bijection(permutation_), ErrorKind::invalid_argument, "column permutation is not a bijection");
    require(is_bijection(row_order_), ErrorKind::invalid_argument, "row order is not a bijection");
    signed_.resize(slot_rows_.size() * order_);
    for (std::size_t t = 0; t < slot_rows_.size(); ++t) {
      const std::int32_t r = slot_rows_[t];
      require(
        r >= -1 && r < static_cast<std::int32_t>(order_), ErrorKind::invalid_argument,
        "slot row index out of range");
      if (r < 0) {
        mean_track_.push_back(t);
      }
      for (std::size_t i = 0; i < order_; ++i) {
        signed_[t * order_ + i] = static_cast<std::int8_t>(
          r < 0 ? 1 : sylvester_entry(static_cast<std::uint32_t>(r), permutation_[i]));
      }
    }
  }

  std::size_t order() const { return order_; }
  std::size_t size() const { return slot_rows_.size(); }
  std::uint64_t seed() const { return seed_; }
  std::size_t mean_track_period() const { return period_; }
  const std::vector<std::uint32_t> & permutation() const { return permutation_; }
  const std::vector<std::uint32_t> & row_order() const { return row_order_; }
  const std::vector<std::int32_t> & slot_rows() const { return slot_rows_; }
  const std::vector<std::size_t> & mean_track_indices() const { return mean_track_; }

  bool is_mean_track(std::size_t t) const { return slot_rows_.at(t) < 0; }

  /// True when phi_t is all ones: a tracking slot or the Hadamard DC row.
  bool is_all_ones(std::size_t t) const { return slot_rows_.at(t) <= 0; }

  /// +-1 source value; tracking slots read as all +1 so that pattern = (signed + 1) / 2 everywhere.
  int sign(std::size_t t, std::size_t i) const { return signed_[t * order_ + i]; }
  int pattern(std::size_t t, std::size_t i) const { return (sign(t, i) + 1) / 2; }

  Eigen::VectorXd signed_column(std::size_t t) const
  {
    Eigen::VectorXd v(order_);
    for (std::size_t i = 0; i < order_; ++i) v[i] = sign(t, i);
    return v;
  }

  Eigen::VectorXd binary_column(std::size_t t) const
  {
    Eigen::VectorXd v(order_);
    for (std::size_t i = 0; i < order_; ++i) v[i] = pattern(t, i);
    return v;
  }

  /// order x count matrix of signed columns for slots [first, first + count).
  Eigen::MatrixXd signed_block(std::size_t first, std::size_t count) const
  {
    require(first + count <= size(), ErrorKind::invalid_argument, "schedule block out of range");
    Eigen::MatrixXd phi(order_, count);
    for (std::size_t k = 0; k < count; ++k) phi.col(k) = signed_column(first + k);
    return phi;
  }

  /// Short identifier that binds measurement files to this schedule.
  std::string id() const
  {
    return "hadamard-" + std::to_string(order_) + "-" + std::to_string(size()) + "-" +
           std::to_string(seed_) + "-" + std::to_string(period_);
  }

  friend bool operator==(const PatternSchedule & a, const PatternSchedule & b)
  {
    return a.order_ == b.order_ && a.seed_ == b.seed_ && a.period_ == b.period_ &&
           a.permutation_ == b.permutation_ && a.row_order_ == b.row_order_ &&
           a.slot_rows_ == b.slot_rows_;
  }

private:
  static bool is_bijection(const std::vector<std::uint32_t> & p)
  {
    std::vector<bool> seen(p.size(), false);
    for (auto v : p) {
      if (v >= p.size() || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  std::size_t order_ = 0;
  std::uint64_t seed_ = 0;
  std::size_t period_ = 0;
  std::vector<std::uint32_t> permutation_;
  std::vector<std::uint32_t> row_order_;
  std::vector<std::int32_t> slot_rows_;  // Hadamard row per slot, -1 on tracking slots
  std::vector<std::int8_t> signed_;      // size() x order(), row-major
  std::vector<std::size_t> mean_track_;
};

/// Build a schedule of `count` slots. A `mean_track_period` of 0 disables tracking; otherwise
/// slots t = 0 (mod period) show the all-ones pattern and push the Hadamard rows back by one.
/// Hadamard rows are visited in a seeded order that starts with the DC row and then cycles.
inline PatternSchedule build_schedule(
  std::size_t order, std::size_t count, std::uint64_t seed, std::size_t mean_track_period = 0)
{
  require(is_power_of_two(order), ErrorKind::invalid_argument, "schedule order must be a power of two");
  require(count >= 1, ErrorKind::invalid_argument, "schedule count must be at least 1");
  require(
    mean_track_period == 0 || mean_track_period >= 2, ErrorKind::invalid_argument,
    "mean-track period must be >= 2 or 0 (disabled)");

  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> permutation(order);
  std::iota(permutation.begin(), permutation.end(), 0u);
  detail::fisher_yates(permutation.begin(), permutation.end(), rng);

  std::vector<std::uint32_t> row_order(order);
  std::iota(row_order.begin(), row_order.end(), 0u);
  detail::fisher_yates(row_order.begin() + 1, row_order.end(), rng);

  std::vector<std::int32_t> slots(count);
  std::size_t next_row = 0;
  for (std::size_t t = 0; t < count; ++t) {
    if (mean_track_period != 0 && t % mean_track_period == 0) {
      slots[t] = -1;
    } else {
      slots[t] = static_cast<std::int32_t>(row_order[next_row++ % order]);
    }
  }
  return PatternSchedule(
    order, seed, mean_track_period, std::move(permutation), std::move(row_order), std::move(slots));
}

/// Convert 0/1-coded measurements to their +-1 equivalents: y_pm = 2 y01 - m, where m is the
/// scene mean measured by all-ones slots, linearly interpolated in time and held constant
/// outside the first and last sample. Columns on all-ones slots come back unchanged.
/// `fallback_mean` (one value per sensor pixel) is used when the window has no all-ones slot.
inline MeasurementSet demean(
  const MeasurementSet & measurements, const PatternSchedule & schedule,
  const std::optional<Eigen::VectorXd> & fallback_mean = std::nullopt)
{
  const std::size_t n = measurements.count();
  require(
    n <= schedule.size(), ErrorKind::dimension_mismatch,
    "more measurement columns than schedule slots");
  require(
    measurements.timestamps.size() == n, ErrorKind::dimension_mismatch,
    "timestamp count differs from measurement count");

  std::vector<std::size_t> samples;
  for (std::size_t t = 0; t < n; ++t) {
    if (schedule.is_all_ones(t)) samples.push_back(t);
  }

  MeasurementSet out = measurements;
  if (samples.empty()) {
    require(
      fallback_mean.has_value(), ErrorKind::invalid_argument,
      "no all-ones measurement in window and no fallback mean supplied");
    require(
      fallback_mean->size() == measurements.Y.rows(), ErrorKind::dimension_mismatch,
      "fallback mean length differs from sensor size");
    for (std::size_t t = 0; t < n; ++t) {
      out.Y.col(t) = 2.0 * measurements.Y.col(t) - *fallback_mean;
    }
    return out;
  }

  const auto & ts = measurements.timestamps;
  std::size_t seg = 0;  // samples[seg] <= t < samples[seg + 1]
  for (std::size_t t = 0; t < n; ++t) {
    Eigen::VectorXd mean;
    if (t <= samples.front()) {
      mean = measurements.Y.col(samples.front());
    } else if (t >= samples.back()) {
      mean = measurements.Y.col(samples.back());
    } else {
      while (samples[seg + 1] <= t) ++seg;
      const std::size_t a = samples[seg];
      const std::size_t b = samples[seg + 1];
      const double w = (ts[t] - ts[a]) / (ts[b] - ts[a]);
      mean = (1.0 - w) * measurements.Y.col(a) + w * measurements.Y.col(b);
    }
    out.Y.col(t) = 2.0 * measurements.Y.col(t) - mean;
  }
  return out;
}

}  // namespace lisens

#endif  // LISENS_CODES_HPP
