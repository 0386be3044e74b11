#include "qpe/tables.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

#ifndef QPE_DATA_DIR
#define QPE_DATA_DIR "data"
#endif

namespace qpe {
namespace {

const std::vector<std::string> kEpsLabels = {"1e-1", "1e-2", "1e-3", "1e-4", "1e-5",
                                             "1e-6", "1e-7", "1e-8", "1e-9", "1e-10"};

Rational eps_of_col(size_t c) {
  Rational e(1);
  for (size_t i = 0; i <= c; ++i) e /= 10;
  return e;
}

struct Table1Row {
  const char* label;
  long num, den;  // alpha = num/den * pi
};
const std::vector<Table1Row> kTable1Rows = {
    {"7pi/16", 7, 16}, {"6pi/16", 6, 16}, {"5pi/16", 5, 16}, {"4pi/16", 4, 16},
    {"3pi/16", 3, 16}, {"2pi/16", 2, 16}, {"pi/16", 1, 16},  {"pi/32", 1, 32},
    {"pi/64", 1, 64},  {"pi/128", 1, 128}, {"pi/256", 1, 256}};

struct Table2Row {
  const char* label;
  bool lenient;  // wedge and k-bit rows
  std::function<long(const Rational&, const PrecisionContext&, double*)> compute;
};

std::vector<Table2Row> table2_rows() {
  auto box = [](int stages, RefMode mode) {
    return [=](const Rational& eps, const PrecisionContext& ctx, double* margin) {
      auto r = box_pipeline_total(stages, mode, eps, ctx);
      *margin = r.rel_margin;
      return r.total;
    };
  };
  auto wedge = [](int stages, RefMode mode) {
    return [=](const Rational& eps, const PrecisionContext& ctx, double* margin) {
      auto r = wedge_pipeline_total(stages, mode, eps, ctx);
      *margin = r.rel_margin;
      return r.total;
    };
  };
  return {
      {"single_stage_box", false, box(1, RefMode::kExact)},
      {"two_stage_box_2bit", true, box(2, RefMode::kBits2)},
      {"two_stage_box_3bit", true, box(2, RefMode::kBits3)},
      {"two_stage_box_exact", false, box(2, RefMode::kExact)},
      {"three_stage_box_2bit", true, box(3, RefMode::kBits2)},
      {"three_stage_box_3bit", true, box(3, RefMode::kBits3)},
      {"three_stage_box_exact", false, box(3, RefMode::kExact)},
      {"single_stage_box_jointly", false,
       [](const Rational& eps, const PrecisionContext& ctx, double* margin) {
         auto r = box_joint_pipeline_total(eps, ctx);
         *margin = r.rel_margin;
         return r.total;
       }},
      {"single_stage_wedge", true, wedge(1, RefMode::kExact)},
      {"two_stage_wedge_2bit", true, wedge(2, RefMode::kBits2)},
      {"two_stage_wedge_3bit", true, wedge(2, RefMode::kBits3)},
      {"two_stage_wedge_exact", true, wedge(2, RefMode::kExact)},
      {"three_stage_wedge_2bit", true, wedge(3, RefMode::kBits2)},
      {"three_stage_wedge_3bit", true, wedge(3, RefMode::kBits3)},
      {"three_stage_wedge_exact", true, wedge(3, RefMode::kExact)},
      {"sign_based", false,
       [](const Rational& eps, const PrecisionContext& ctx, double* margin) {
         auto r = triple_sign_total(eps, ctx);
         *margin = r.rel_margin;
         return r.total;
       }},
      {"sign_based_bound", false,
       [](const Rational& eps, const PrecisionContext& ctx, double*) {
         return triple_sign_bound(eps, ctx);
       }},
      {"majority_sign", false,
       [](const Rational& eps, const PrecisionContext& ctx, double* margin) {
         auto r = majority_sign_total(eps, ctx);
         *margin = r.rel_margin;
         return r.total;
       }},
      {"majority_sign_bound", false,
       [](const Rational& eps, const PrecisionContext& ctx, double*) {
         return majority_sign_bound(eps, ctx);
       }},
  };
}

// Deterministic cell-parallel map: results land by index.
void parallel_cells(long count, int jobs, const std::function<void(long)>& work) {
  jobs = std::max(1, std::min(jobs, max_parallel_jobs()));
  if (jobs == 1) {
    for (long i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
    });
  for (auto& th : pool) th.join();
}

Table make_grid(std::string name, std::string corner, std::vector<std::string> rows,
                std::vector<std::string> cols) {
  Table t;
  t.name = std::move(name);
  t.corner = std::move(corner);
  t.row_labels = std::move(rows);
  t.col_labels = std::move(cols);
  t.cells.assign(t.row_labels.size(), std::vector<std::string>(t.col_labels.size()));
  t.margins.assign(t.row_labels.size(), std::vector<double>(t.col_labels.size(), 1.0));
  return t;
}

Table generate_table1(const PrecisionContext& ctx, int jobs) {
  std::vector<std::string> rows;
  for (const auto& r : kTable1Rows) rows.push_back(r.label);
  Table t = make_grid("table1", "angle/eps", rows, kEpsLabels);
  const long total = static_cast<long>(rows.size() * kEpsLabels.size());
  parallel_cells(total, jobs, [&](long idx) {
    const size_t r = static_cast<size_t>(idx) / kEpsLabels.size();
    const size_t c = static_cast<size_t>(idx) % kEpsLabels.size();
    auto res = sign_min_n(PiRational(kTable1Rows[r].num, kTable1Rows[r].den), eps_of_col(c), ctx);
    t.cells[r][c] = std::to_string(res.n);
    t.margins[r][c] = res.rel_margin;
  });
  return t;
}

Table generate_table2(const PrecisionContext& ctx, int jobs,
                      const std::vector<std::string>& row_filter) {
  auto all_rows = table2_rows();
  std::vector<Table2Row> rows;
  for (const auto& r : all_rows)
    if (row_filter.empty() ||
        std::find(row_filter.begin(), row_filter.end(), r.label) != row_filter.end())
      rows.push_back(r);
  std::vector<std::string> labels;
  for (const auto& r : rows) labels.push_back(r.label);
  Table t = make_grid("table2", "description/eps", labels, kEpsLabels);
  const long total = static_cast<long>(rows.size() * kEpsLabels.size());
  parallel_cells(total, jobs, [&](long idx) {
    const size_t r = static_cast<size_t>(idx) / kEpsLabels.size();
    const size_t c = static_cast<size_t>(idx) % kEpsLabels.size();
    double margin = 1.0;
    long v = rows[r].compute(eps_of_col(c), ctx, &margin);
    t.cells[r][c] = std::to_string(v);
    t.margins[r][c] = margin;
  });
  return t;
}

Table generate_table3(const PrecisionContext& ctx, int jobs) {
  const std::vector<std::string> rows = {"k_eps_sufficient", "k_eps_bound",
                                         "N_s_triple_sign",  "N_s_triple_sign_bound",
                                         "N_m_majority",     "N_m_majority_bound"};
  Table t = make_grid("table3", "description/eps", rows, kEpsLabels);
  parallel_cells(static_cast<long>(kEpsLabels.size()), jobs, [&](long c) {
    const Rational eps = eps_of_col(static_cast<size_t>(c));
    t.cells[0][c] = std::to_string(k_eps_exact(eps, ctx));
    t.cells[1][c] = std::to_string(k_eps_bound(eps, ctx));
    auto ns = n_eps(eps, FirstStage::kTripleSign, ctx);
    t.cells[2][c] = std::to_string(ns.total);
    t.margins[2][c] = ns.rel_margin;
    t.cells[3][c] = std::to_string(n_eps_bound(eps, FirstStage::kTripleSign, ctx));
    auto nm = n_eps(eps, FirstStage::kMajority, ctx);
    t.cells[4][c] = std::to_string(nm.total);
    t.margins[4][c] = nm.rel_margin;
    t.cells[5][c] = std::to_string(n_eps_bound(eps, FirstStage::kMajority, ctx));
  });
  return t;
}

Table generate_table4(FirstStage fs, const PrecisionContext& ctx, int jobs) {
  std::vector<std::string> cols;
  for (int m = 1; m <= 19; ++m) cols.push_back("m=" + std::to_string(m));
  Table t = make_grid(fs == FirstStage::kTripleSign ? "table4_sign" : "table4_majority",
                      "eps/m", kEpsLabels, cols);
  const long total = static_cast<long>(kEpsLabels.size() * cols.size());
  parallel_cells(total, jobs, [&](long idx) {
    const size_t r = static_cast<size_t>(idx) / cols.size();
    const size_t c = static_cast<size_t>(idx) % cols.size();
    auto entry = m_table_entry(eps_of_col(r), static_cast<long>(c) + 1, fs, ctx);
    t.cells[r][c] = entry ? std::to_string(entry->total) : "-";
    if (entry) t.margins[r][c] = entry->rel_margin;
  });
  return t;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int max_parallel_jobs() {
  if (!mpfr_buildopt_tls_p()) return 1;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::string default_data_dir() { return QPE_DATA_DIR; }

Table generate_table(int table_id, const PrecisionContext& ctx, int jobs,
                     const std::vector<std::string>& row_filter) {
  switch (table_id) {
    case 1: return generate_table1(ctx, jobs);
    case 2: return generate_table2(ctx, jobs, row_filter);
    case 3: return generate_table3(ctx, jobs);
    case 41: return generate_table4(FirstStage::kTripleSign, ctx, jobs);
    case 42: return generate_table4(FirstStage::kMajority, ctx, jobs);
    default: throw std::domain_error("generate_table: id must be 1, 2, 3, 41 or 42");
  }
}

Table load_golden_table(int table_id, const std::string& data_dir) {
  std::string file;
  switch (table_id) {
    case 1: file = "table1.csv"; break;
    case 2: file = "table2.csv"; break;
    case 3: file = "table3.csv"; break;
    case 41: file = "table4_sign.csv"; break;
    case 42: file = "table4_majority.csv"; break;
    default: throw std::domain_error("load_golden_table: bad id");
  }
  std::ifstream in(data_dir + "/" + file);
  if (!in) throw std::runtime_error("cannot open golden table " + data_dir + "/" + file);
  std::stringstream ss;
  ss << in.rdbuf();
  Table t = table_from_csv(ss.str(), "golden" + std::to_string(table_id));
  return t;
}

ReproductionReport compare_tables(const Table& computed, const Table& golden, bool strict) {
  ReproductionReport rep;
  rep.table = computed.name;
  if (computed.col_labels != golden.col_labels)
    throw std::runtime_error("compare_tables: column labels differ");
  auto lenient_rows = table2_rows();
  for (size_t r = 0; r < computed.row_labels.size(); ++r) {
    const auto& label = computed.row_labels[r];
    auto git = std::find(golden.row_labels.begin(), golden.row_labels.end(), label);
    if (git == golden.row_labels.end())
      throw std::runtime_error("compare_tables: golden table lacks row " + label);
    const size_t gr = static_cast<size_t>(git - golden.row_labels.begin());
    bool lenient_class = false;
    for (const auto& row : lenient_rows)
      if (label == row.label) lenient_class = row.lenient;
    for (size_t c = 0; c < computed.col_labels.size(); ++c) {
      ++rep.cells;
      const std::string& got = computed.cells[r][c];
      const std::string& want = golden.cells[gr][c];
      if (!computed.margins.empty() && computed.margins[r][c] < 1e-9)
        rep.borderline.push_back(label + "," + computed.col_labels[c]);
      if (got == want) continue;
      CellDiff d{label, computed.col_labels[c], got, want, lenient_class, 0};
      if (got != "-" && want != "-") d.abs_diff = std::labs(std::stol(got) - std::stol(want));
      const bool tolerated = !strict && lenient_class && d.abs_diff > 0 && d.abs_diff <= 2;
      if (tolerated)
        ++rep.warnings;
      else
        ++rep.mismatches;
      rep.diffs.push_back(std::move(d));
    }
  }
  return rep;
}

std::string table_to_csv(const Table& t) {
  std::string out = t.corner;
  for (const auto& c : t.col_labels) out += "," + c;
  out += "\n";
  for (size_t r = 0; r < t.row_labels.size(); ++r) {
    out += t.row_labels[r];
    for (const auto& cell : t.cells[r]) out += "," + cell;
    out += "\n";
  }
  return out;
}

std::string table_to_markdown(const Table& t) {
  std::string out = "| " + t.corner;
  for (const auto& c : t.col_labels) out += " | " + c;
  out += " |\n|";
  for (size_t i = 0; i <= t.col_labels.size(); ++i) out += "---|";
  out += "\n";
  for (size_t r = 0; r < t.row_labels.size(); ++r) {
    out += "| " + t.row_labels[r];
    for (const auto& cell : t.cells[r]) out += " | " + cell;
    out += " |\n";
  }
  return out;
}

Table table_from_csv(const std::string& csv, const std::string& name) {
  Table t;
  t.name = name;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (header) {
      t.corner = fields[0];
      t.col_labels.assign(fields.begin() + 1, fields.end());
      header = false;
      continue;
    }
    t.row_labels.push_back(fields[0]);
    t.cells.emplace_back(fields.begin() + 1, fields.end());
  }
  return t;
}

}  // namespace qpe
