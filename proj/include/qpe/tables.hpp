#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qpe/pipelines.hpp"
#include "qpe/planner.hpp"

namespace qpe {

// Rectangular table of strings; counts are exact integers, dashes are "-".
struct Table {
  std::string name;
  std::string corner;                  // header of the label column
  std::vector<std::string> col_labels;
  std::vector<std::string> row_labels;
  std::vector<std::vector<std::string>> cells;  // [row][col]
  // deciding-comparison margin per cell (relative), when meaningful
  std::vector<std::vector<double>> margins;
};

struct CellDiff {
  std::string row, col, computed, golden;
  bool lenient_class = false;  // wedge / k-bit rows: tolerance of 2 samples
  long abs_diff = 0;
};

struct ReproductionReport {
  std::string table;
  long cells = 0;
  long mismatches = 0;          // hard mismatches (drive the exit status)
  long warnings = 0;            // lenient-class mismatches within tolerance
  std::vector<CellDiff> diffs;
  std::vector<std::string> borderline;  // cells with relative margin < 1e-9
  bool ok() const { return mismatches == 0; }
};

// Generates the paper tables. jobs > 1 parallelizes over independent cells
// (facts are assembled deterministically regardless of scheduling).
Table generate_table(int table_id, const PrecisionContext& ctx, int jobs = 1,
                     const std::vector<std::string>& row_filter = {});

Table load_golden_table(int table_id, const std::string& data_dir);

// strict: every mismatch counts. lenient: wedge and k-bit rows tolerate a
// difference of up to 2 samples per cell (reported as warnings).
ReproductionReport compare_tables(const Table& computed, const Table& golden, bool strict);

std::string table_to_csv(const Table& t);
std::string table_to_markdown(const Table& t);
Table table_from_csv(const std::string& csv, const std::string& name);

// Default golden-data directory baked in at configure time; overridable.
std::string default_data_dir();

// Maximum usable parallelism (1 when the MPFR build is not thread-safe).
int max_parallel_jobs();

}  // namespace qpe
