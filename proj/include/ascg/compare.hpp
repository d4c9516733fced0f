#pragma once

#include "ascg/io.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ascg {

struct CompareEntry {
    std::string label;
    Algorithm algorithm = Algorithm::ASCG;
    SolverConfig config;
};

struct CompareRow {
    std::string label;
    bool ok = true;
    std::string error;
    int iterations = 0;
    /// First iteration whose FW gap is at or below 1e-3 / 1e-6; -1 if never reached.
    int iters_to_1e3 = -1;
    int iters_to_1e6 = -1;
    double final_f = 0;
    double final_gap = 0;
    int drop_steps = 0;
    int max_repr_size = 0;
};

/// First row with fw_gap <= threshold, or -1.
int iterations_to_gap(const std::vector<StepRecord>& steps, double threshold);

/// Runs every entry (concurrently when `parallel`); rows are in entry order. A failing run
/// produces a row with ok = false instead of aborting the others.
std::vector<CompareRow> compare(const Problem& problem, const std::vector<CompareEntry>& entries,
                                bool parallel = true);

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);
std::string format_compare_table(const std::vector<CompareRow>& rows);

} // namespace ascg
