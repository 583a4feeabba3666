#include <gtest/gtest.h>

#include <cmath>

#include "srwec/csv.hpp"
#include "srwec/error.hpp"
#include "srwec/ndbc/resource_table.hpp"
#include "srwec/ndbc/swden.hpp"
#include "srwec/sea/spectra.hpp"
#include "support.hpp"

using namespace srwec;
using namespace srwec::ndbc;

namespace {

std::vector<double> ndbc_grid() {
  return {0.0200, 0.0325, 0.0375, 0.0425, 0.0475, 0.0525, 0.0575, 0.0625, 0.0675, 0.0725,
          0.0775, 0.0825, 0.0875, 0.0925, 0.1000, 0.1100, 0.1200, 0.1300, 0.1400, 0.1500,
          0.1600, 0.1700, 0.1800, 0.1900, 0.2000, 0.2100, 0.2200, 0.2300, 0.2400, 0.2500,
          0.2600, 0.2700, 0.2800, 0.2900, 0.3000, 0.3100, 0.3200, 0.3300, 0.3400, 0.3500,
          0.3650, 0.3850, 0.4050, 0.4250, 0.4450, 0.4650, 0.4850};
}

SpectralRecord jonswap_record(double hs, double tp) {
  SpectralRecord r;
  r.timestamp = {2018, 6, 1, 12, 40};
  r.freq = ndbc_grid();
  // JONSWAP shape sampled on the buoy grid, scaled to hs on that grid.
  const double fp = 1.0 / tp;
  for (double f : r.freq) r.density.push_back(sea::jonswap_shape(f, fp, 1.0));
  sea::SpectralDensity s{r.freq, r.density};
  const double k = hs * hs / 16.0 / sea::moment(s, 0);
  for (double& d : r.density) d *= k;
  return r;
}

}  // namespace

TEST(Swden, BundledFixtureParses) {
  const auto res = parse_swden(csv::read_text(test::fixture("swden_sample.txt")));
  ASSERT_EQ(res.records.size(), 4u);
  EXPECT_TRUE(res.has_minute_column);
  for (const auto& r : res.records) EXPECT_EQ(r.freq.size(), 47u);
  EXPECT_FALSE(res.records[0].missing);
  EXPECT_FALSE(res.records[2].missing);
  EXPECT_TRUE(res.records[3].missing);
  EXPECT_EQ(res.records[1].timestamp, (Timestamp{2018, 1, 1, 1, 40}));
  ASSERT_EQ(res.errors.size(), 1u);
  EXPECT_EQ(res.errors[0].line, 6u);
}

TEST(Swden, EmptyInputIsAFormatError) {
  EXPECT_THROW(parse_swden(""), FormatError);
  EXPECT_THROW(parse_swden("2018 01 01 00 00 0.1 0.2\n"), FormatError);
}

TEST(Swden, SingleSentinelMarksTheRecordMissing) {
  const auto res = parse_swden("#YY MM DD hh mm 0.1 0.2 0.3\n2018 01 01 00 00 1.0 999.00 0.5\n");
  ASSERT_EQ(res.records.size(), 1u);
  EXPECT_TRUE(res.records[0].missing);
}

TEST(Swden, FourDateColumnsAndUnitsLine) {
  const auto res = parse_swden("#YY MM DD hh 0.1 0.2\n#yr mo dy hr Hz Hz\n99 12 31 23 0.5 0.25\n");
  ASSERT_EQ(res.records.size(), 1u);
  EXPECT_FALSE(res.has_minute_column);
  EXPECT_EQ(res.records[0].timestamp.year, 1999);
}

TEST(Swden, EmitParseRoundTripIsExact) {
  const auto first = parse_swden(csv::read_text(test::fixture("swden_sample.txt")));
  const auto again = parse_swden(emit_swden(first.records));
  EXPECT_EQ(again.records, first.records);
  EXPECT_TRUE(again.errors.empty());
}

TEST(Characterize, PercentagesSumToHundred) {
  const auto res = parse_swden(csv::read_text(test::fixture("swden_sample.txt")));
  const auto t = characterize(res.records);
  EXPECT_EQ(t.n_records, 3u);
  EXPECT_NEAR(t.total_pct(), 100.0, 1e-6);
  for (const auto& row : t.pct) {
    for (double p : row) EXPECT_GE(p, 0.0);
  }
}

TEST(Characterize, SyntheticRecordLandsInItsBin) {
  // Independent quadrature on the buoy grid: trapezoid by hand, not via the library's weights.
  const auto rec = jonswap_record(1.25, 8.7);
  double m0 = 0.0, m_1 = 0.0;
  for (std::size_t i = 1; i < rec.freq.size(); ++i) {
    const double h = rec.freq[i] - rec.freq[i - 1];
    m0 += 0.5 * h * (rec.density[i] + rec.density[i - 1]);
    m_1 += 0.5 * h * (rec.density[i] / rec.freq[i] + rec.density[i - 1] / rec.freq[i - 1]);
  }
  const double hs = 4.0 * std::sqrt(m0), te = m_1 / m0;
  EXPECT_NEAR(hs, 1.25, 1e-9);
  EXPECT_GE(te, 7.0);
  EXPECT_LT(te, 8.0);

  const auto t = characterize({rec});
  const auto [i, j] = t.locate(1.25, 7.5);
  ASSERT_GE(i, 0);
  EXPECT_NEAR(t.pct[i][j], 100.0, 1e-12);
}

TEST(Characterize, RecoversGeneratingStateWithinTwoPercent) {
  for (const auto& [hs, tp] : {std::pair{1.0, 7.0}, {2.0, 9.0}, {3.0, 11.0}}) {
    const auto rec = jonswap_record(hs, tp);
    sea::SpectralDensity s{rec.freq, rec.density};
    EXPECT_NEAR(sea::significant_height(s) / hs, 1.0, 0.02);
    EXPECT_NEAR(sea::energy_period(s) / (0.862 * tp), 1.0, 0.02);
  }
}

TEST(Characterize, AllMissingIsEmptyInput) {
  SpectralRecord r = jonswap_record(1.0, 8.0);
  r.missing = true;
  EXPECT_THROW(characterize({r}), EmptyInputError);
}

TEST(Characterize, EveryRecordLandsInExactlyOneCell) {
  std::vector<SpectralRecord> recs;
  for (double hs : {0.3, 1.1, 2.6, 12.0}) {
    for (double tp : {3.0, 6.0, 9.0, 14.0, 20.0}) recs.push_back(jonswap_record(hs, tp));
  }
  const auto t = characterize(recs);
  double in_range = 0.0;
  for (const auto& row : t.pct) {
    for (double p : row) in_range += p;
  }
  EXPECT_NEAR(in_range + t.out_of_range_pct, 100.0, 1e-9);
  EXPECT_GT(t.out_of_range_pct, 0.0);
  // Each in-range cell holds a whole number of records.
  for (const auto& row : t.pct) {
    for (double p : row) {
      const double count = p / 100.0 * recs.size();
      EXPECT_NEAR(count, std::round(count), 1e-9);
    }
  }
}

TEST(ResourceTable, BundledTableGivesTheElevenPeakPeriods) {
  const auto t = read_resource_csv(test::fixture("table1_reference.csv"));
  const auto sel = select_representative(t);
  const std::vector<double> tp{4.06, 5.22, 6.38, 7.54, 8.70, 9.86, 11.02, 12.18, 13.34, 14.5, 15.66};
  ASSERT_EQ(sel.states.size(), tp.size());
  for (std::size_t i = 0; i < tp.size(); ++i) {
    EXPECT_NEAR(sel.states[i].tp, tp[i], 1e-9);
    EXPECT_NEAR(t.tp_row[i] / (kTpOverTe * t.te_centers[i]), 1.0, 0.005);
  }
  EXPECT_NEAR(t.total_pct(), 100.0, 0.05);
  EXPECT_NEAR(t.pct[2][4], 8.84, 1e-12);
}

TEST(ResourceTable, WeightedMeanHsOfTheSevenAndAHalfSecondColumn) {
  // Hand computation over the published column: sum(hs_center * pct) / sum(pct).
  const auto t = read_resource_csv(test::fixture("table1_reference.csv"));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.hs_centers.size(); ++i) {
    num += t.hs_centers[i] * t.pct[i][4];
    den += t.pct[i][4];
  }
  const auto sel = select_representative(t, HsPolicy::WeightedMean);
  EXPECT_NEAR(sel.states[4].hs, num / den, 1e-12);
  EXPECT_NEAR(sel.states[4].hs, 1.79, 0.03);
  const auto modal = select_representative(t, HsPolicy::ModalBin);
  EXPECT_EQ(modal.states[4].hs, 1.25);
}

TEST(ResourceTable, SingleBinTable) {
  auto t = ResourceBinTable::standard_bins();
  t.pct[3][2] = 100.0;
  t.n_records = 1;
  const auto sel = select_representative(t);
  ASSERT_EQ(sel.states.size(), 1u);
  EXPECT_EQ(sel.states[0].hs, t.hs_centers[3]);
  EXPECT_EQ(sel.states[0].tp, t.tp_row[2]);
  EXPECT_FALSE(sel.warnings.empty());
}

TEST(ResourceTable, CsvRoundTrip) {
  const auto t = read_resource_csv(test::fixture("table1_reference.csv"));
  const auto text = resource_csv(t).str();
  const auto again = parse_resource_csv(text);
  EXPECT_EQ(again.pct, t.pct);
  EXPECT_EQ(again.tp_row, t.tp_row);
  EXPECT_EQ(resource_csv(again).str(), text);
}

TEST(Ndbc, HistoryUrlPattern) {
  EXPECT_EQ(history_url("41002", 2018),
            "https://www.ndbc.noaa.gov/view_text_file.php?filename=41002w2018.txt.gz&dir=data/"
            "historical/swden/");
}
