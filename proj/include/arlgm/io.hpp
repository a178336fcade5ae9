#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arlgm/algebra.hpp"
#include "arlgm/scoring.hpp"
#include "arlgm/simulate.hpp"

namespace arlgm {

/// Column-labelled numeric table (rows = time points).
struct Table {
  std::vector<std::string> names;
  Matrix data;
};

/// Strict CSV reader: optional header row, decimal-point doubles, no
/// missing cells.  Column names default to x0..x{m-1} without a header.
Table read_csv(const std::string& path);

/// CSV writer with 17-significant-digit floats.
void write_csv(const std::string& path, const Table& table);

void write_true_model(const std::string& path, const LatentArModel& model,
                      std::uint64_t seed);
LatentArModel read_true_model(const std::string& path,
                              std::uint64_t* seed = nullptr);

void write_identified_model(const std::string& path, const ScoredModel& point);
ScoredModel read_identified_model(const std::string& path);

void write_sweep_report(const std::string& path, const SweepResult& result,
                        const SweepOptions& opts);

/// Undirected graph of the manifest edges plus one dashed node per latent
/// variable connected to every manifest node; edge count equals the
/// complexity p.
std::string dot_string(const EdgeSet& edges, int l,
                       const std::vector<std::string>& names);
void write_dot(const std::string& path, const EdgeSet& edges, int l,
               const std::vector<std::string>& names);

}  // namespace arlgm
