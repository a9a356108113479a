#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "erasurelab/error.hpp"
#include "erasurelab/report.hpp"

using namespace erasurelab;
using namespace erasurelab::report;

TEST(Numbers, FormatRoundTrips) {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1e-300, 6.02214076e23, 877.2, std::nextafter(1.0, 2.0)}) {
    EXPECT_EQ(parse_number(format_number(v)), v) << format_number(v);
  }
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_TRUE(std::isnan(parse_number(format_number(std::nan("")))));
  EXPECT_THROW(parse_number("12abc"), DomainError);
  EXPECT_TRUE(num(std::numeric_limits<double>::infinity()).is_string());
  EXPECT_TRUE(num(2.0).is_number());
}

TEST(Csv, RoundTripWithQuoting) {
  CsvTable t{{"a", "b,c", "q"}, {{"1", "x\"y", ""}, {"line\nbreak", "2e-5", "plain"}, {"", "", ""}}};
  std::stringstream ss;
  write_csv(ss, t);
  EXPECT_EQ(read_csv(ss), t);
}

TEST(Csv, RejectsRaggedRowsAndOpenQuotes) {
  std::stringstream ragged("a,b\n1\n");
  EXPECT_THROW(read_csv(ragged), DomainError);
  std::stringstream open("a\n\"x\n");
  EXPECT_THROW(read_csv(open), DomainError);
  std::stringstream crlf("a,b\r\n1,2\r\n");
  const auto t = read_csv(crlf);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "2");
}

TEST(Csv, TrialsTableRoundTrips) {
  mc::SimSummary s;
  s.trials = {{0, 17, 0.5, 2.0, 4.0}, {1, 18, 0.25, 2.5, std::numeric_limits<double>::infinity()}};
  const auto t = trials_table(s);
  EXPECT_EQ(t.header, (std::vector<std::string>{"trial", "seed", "s_min", "s_max", "cond"}));
  std::stringstream ss;
  write_csv(ss, t);
  const auto back = read_csv(ss);
  EXPECT_EQ(back, t);
  EXPECT_EQ(parse_number(back.rows[0][4]), 4.0);
  EXPECT_TRUE(std::isinf(parse_number(back.rows[1][4])));
}

TEST(Csv, KeyValueTable) {
  Json j = {{"x", 0.5}, {"name", "n"}, {"k", 3}, {"none", nullptr}};
  const auto t = key_value_table(j);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0], (std::vector<std::string>{"x", "0.5"}));
  EXPECT_EQ(t.rows[1][1], "n");
  EXPECT_EQ(t.rows[2][1], "3");
  EXPECT_EQ(t.rows[3][1], "");
}

TEST(Json, EnvelopeAndStrip) {
  const auto doc = envelope("verify", {{"seed", 1}}, {{"ok", true}}, 0.25);
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["command"], "verify");
  EXPECT_TRUE(doc.contains("run_info"));
  EXPECT_TRUE(doc["run_info"].contains("timestamp"));
  const auto stripped = strip_run_info(doc);
  EXPECT_FALSE(stripped.contains("run_info"));
  EXPECT_EQ(stripped["config"]["seed"], 1);
}

TEST(Json, CheckSerialization) {
  const auto c = mc::frequency_check("x", 0.5, 3, 100);
  const auto j = to_json(c);
  EXPECT_EQ(j["events"], 3);
  EXPECT_EQ(j["verdict"], "holds");
  auto m = c;
  m.events.reset();
  EXPECT_TRUE(to_json(m)["events"].is_null());
}

TEST(Svg, Polyline) {
  const auto svg = svg_polyline({{1, 2, 3}, {10, 100, 1000}}, "C curve", "lambda", "C", true);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("C (log10)"), std::string::npos);
  EXPECT_THROW(svg_polyline({{1, 2}, {1}}, "", "", ""), DomainError);
}

TEST(PaperTables, LoadsReferenceFile) {
  const auto cells = load_paper_tables();
  EXPECT_GE(cells.size(), 100u);
  int certificate_cells = 0;
  for (const auto& c : cells) {
    if (c.table >= 1 && c.table <= 3) {
      ++certificate_cells;
      EXPECT_TRUE(c.nu.has_value());
    }
    if (c.table >= 4) {
      EXPECT_TRUE(c.rows.has_value());
      EXPECT_TRUE(c.cols.has_value());
    }
  }
  EXPECT_EQ(certificate_cells, 45);
}

TEST(Compare, RelativeGapIffPaperValue) {
  const auto with = make_row(1, "a", "p", "C", 10.0, 12.0, "");
  ASSERT_TRUE(with.relative_gap.has_value());
  EXPECT_NEAR(*with.relative_gap, 0.2, 1e-15);
  EXPECT_FALSE(make_row(0, "a", "p", "x", std::nullopt, 1.0, "").relative_gap.has_value());
  const std::vector<ComparisonRow> rows{with, make_row(0, "a", "p", "x", std::nullopt, 1.0, "")};
  const auto t = comparison_table(rows);
  EXPECT_EQ(t.rows[1][4], "");
  EXPECT_EQ(t.rows[1][6], "");
}

TEST(Compare, EmptySelectionGivesNoRows) {
  CompareOptions opt;
  opt.tables = {};
  EXPECT_TRUE(compare_tables(load_paper_tables(), opt).empty());
}

TEST(Compare, CertificateTablesAndNotes) {
  CompareOptions opt;
  opt.tables = {1, 2, 3};
  const auto rows = compare_tables(load_paper_tables(), opt);
  EXPECT_EQ(rows.size(), 45u + 2u);
  bool identical_p_note = false;
  for (const auto& r : rows) {
    if (r.table == 0) {
      EXPECT_FALSE(r.paper_value.has_value());
      continue;
    }
    EXPECT_TRUE(r.relative_gap.has_value());
    EXPECT_TRUE(std::isfinite(r.computed_value));
    identical_p_note = identical_p_note || r.note.find("identical") != std::string::npos;
  }
  EXPECT_TRUE(identical_p_note);
}

TEST(Compare, SimulationCellsSkippedAboveMaxRows) {
  CompareOptions opt;
  opt.tables = {9};
  opt.trials = 5;
  opt.max_rows = 10;
  for (const auto& r : compare_tables(load_paper_tables(), opt)) {
    EXPECT_TRUE(std::isnan(r.computed_value));
    EXPECT_NE(r.note.find("skipped"), std::string::npos);
  }
}
