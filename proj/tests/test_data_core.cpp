#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "support.hpp"
#include "ydss/contingency.hpp"
#include "ydss/csv.hpp"
#include "ydss/error.hpp"
#include "ydss/schema.hpp"

using namespace ydss;
using ydss::testing::random_dataset;
using ydss::testing::small_schema;

TEST(Schema, DefaultSurveyLevelCounts)
{
    const auto s = default_survey_schema();
    ASSERT_EQ(s.size(), 9u);
    const std::vector<std::size_t> expected{7, 3, 9, 2, 4, 3, 3, 8, 3};
    for (std::size_t a = 0; a < s.size(); ++a) EXPECT_EQ(s[a].level_count(), expected[a]) << s[a].name;
    EXPECT_EQ(s.class_attribute().name, "Type of Further Education Desire");
    EXPECT_EQ(s.class_attribute().levels[s.baseline_class()], "No Desire");
    EXPECT_EQ(s.predictor_indices().size(), 8u);
}

TEST(Schema, RejectsInvalidDefinitions)
{
    auto make = [](std::vector<Attribute> a) { return AttributeSchema(std::move(a)); };
    EXPECT_THROW(make({{"A", {"x"}, Role::predictor}, {"Y", {"a", "b"}, Role::target}}),
                 ValidationError);
    EXPECT_THROW(make({{"A", {"x", "x"}, Role::predictor}, {"Y", {"a", "b"}, Role::target}}),
                 ValidationError);
    EXPECT_THROW(make({{"A", {"x", "y"}, Role::predictor}, {"A", {"a", "b"}, Role::target}}),
                 ValidationError);
    EXPECT_THROW(make({{"A", {"x", "y"}, Role::predictor}, {"B", {"a", "b"}, Role::predictor}}),
                 ValidationError);
    EXPECT_THROW(make({{"A", {"x", "y"}, Role::target}, {"B", {"a", "b"}, Role::target}}),
                 ValidationError);
}

TEST(Schema, JsonRoundTripAndHash)
{
    const auto s = default_survey_schema();
    const auto back = AttributeSchema::from_json(s.to_json());
    EXPECT_EQ(back, s);
    EXPECT_EQ(back.hash(), s.hash());
    EXPECT_EQ(s.hash().size(), 16u);
    EXPECT_NE(small_schema({2}).hash(), s.hash());
    EXPECT_THROW(AttributeSchema::from_json(nlohmann::json::array()), ValidationError);
}

TEST(Schema, BaselineFallsBackToLastLevel)
{
    AttributeSchema s({{"A", {"x", "y"}, Role::predictor}, {"Y", {"p", "q", "r"}, Role::target}});
    EXPECT_EQ(s.baseline_class(), 2);
}

TEST(Dataset, AddValidatesRecords)
{
    Dataset d(small_schema({2, 3}));
    const std::vector<LevelIndex> ok{1, 2, 0};
    d.add(ok);
    EXPECT_EQ(d.size(), 1u);
    const std::vector<LevelIndex> bad_level{2, 0, 0};
    EXPECT_THROW(d.add(bad_level), ValidationError);
    const std::vector<LevelIndex> short_rec{0, 0};
    EXPECT_THROW(d.add(short_rec), ValidationError);
}

TEST(Dataset, SplitIsDeterministicPartition)
{
    const auto d = random_dataset(small_schema({3, 2}), 101, 5);
    const auto a = train_test_split(d, 0.2, 9);
    const auto b = train_test_split(d, 0.2, 9);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
    EXPECT_EQ(a.test.size(), 20u);
    EXPECT_EQ(a.train.size() + a.test.size(), d.size());
    const auto c = train_test_split(d, 0.2, 10);
    EXPECT_FALSE(c.test == a.test);
}

TEST(CrossTab, FourDistinctRecords)
{
    AttributeSchema s({{"Gender", {"Male", "Female"}, Role::predictor},
                       {"Class", {"T", "U", "No Desire"}, Role::target}});
    Dataset d(s);
    for (auto [g, c] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 1}, {1, 2}}) {
        const std::vector<LevelIndex> r{static_cast<LevelIndex>(g), static_cast<LevelIndex>(c)};
        d.add(r);
    }
    const auto t = cross_tab(d, "Gender", "Class");
    ASSERT_EQ(t.rows(), 2u);
    ASSERT_EQ(t.cols(), 3u);
    EXPECT_EQ(t.total(), 4u);
    int ones = 0, zeros = 0;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 3; ++j) (t.at(i, j) == 1 ? ones : zeros) += 1;
    }
    EXPECT_EQ(ones, 4);
    EXPECT_EQ(zeros, 2);
    EXPECT_THROW(cross_tab(d, "Gender", "Nope"), ValidationError);
}

TEST(CrossTab, TransposeSymmetryAndTallyOracle)
{
    const auto s = small_schema({4, 3, 5});
    const auto d = random_dataset(s, 1000, 77);
    const auto ab = cross_tab(d, "A", "C");
    EXPECT_EQ(ab.transposed(), cross_tab(d, "C", "A"));

    std::vector<std::vector<std::uint64_t>> tally(4, std::vector<std::uint64_t>(5, 0));
    for (std::size_t i = 0; i < d.size(); ++i) ++tally[d.value(i, 0)][d.value(i, 2)];
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(ab.at(i, j), tally[i][j]);
    }
    EXPECT_EQ(ab.total(), d.size());
}

TEST(Csv, ParsesQuotesCrlfAndBom)
{
    std::istringstream in("\xEF\xBB\xBF" "a,\"b,c\",\"say \"\"hi\"\"\"\r\n\r\nx,,\"multi\nline\"\r\n");
    const auto rows = parse_csv(in);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b,c", "say \"hi\""}));
    EXPECT_EQ(rows[1], (std::vector<std::string>{"x", "", "multi\nline"}));
}

TEST(Csv, EmptyBodyGivesEmptyDataset)
{
    const auto s = default_survey_schema();
    std::string header;
    for (std::size_t a = 0; a < s.size(); ++a) header += (a ? "," : "") + csv_escape(s[a].name);
    std::istringstream in(header + "\n");
    const auto r = read_csv(in, s);
    EXPECT_EQ(r.data.size(), 0u);
}

TEST(Csv, UnknownLevelNamesRowAndColumn)
{
    AttributeSchema s({{"Gender", {"Male", "Female"}, Role::predictor},
                       {"Class", {"T", "No Desire"}, Role::target}});
    std::istringstream in("Gender,Class\nMaale,T\n");
    try {
        read_csv(in, s);
        FAIL() << "expected CsvError";
    } catch (const CsvError& e) {
        EXPECT_EQ(e.row(), 1u);
        EXPECT_EQ(e.column(), "Gender");
        EXPECT_NE(std::string(e.what()).find("Maale"), std::string::npos);
    }
}

TEST(Csv, SkipPolicyCountsRejectedRows)
{
    AttributeSchema s({{"Gender", {"Male", "Female"}, Role::predictor},
                       {"Class", {"T", "No Desire"}, Role::target}});
    std::istringstream in("Class,Gender\nT,Male\nT,\nNo Desire,Other\nNo Desire,Female\n");
    const auto r = read_csv(in, s, RowPolicy::skip);
    EXPECT_EQ(r.skipped_rows, 2u);
    ASSERT_EQ(r.data.size(), 2u);
    // Columns are normalised to schema order.
    EXPECT_EQ(r.data.value(0, 0), 0);
    EXPECT_EQ(r.data.value(0, 1), 0);
    EXPECT_EQ(r.data.value(1, 0), 1);
    EXPECT_EQ(r.data.value(1, 1), 1);
    EXPECT_EQ(cross_tab(r.data, "Gender", "Class").total(), 2u);
}

TEST(Csv, HeaderProblemsAreAlwaysFatal)
{
    AttributeSchema s({{"Gender", {"Male", "Female"}, Role::predictor},
                       {"Class", {"T", "No Desire"}, Role::target}});
    for (const char* text : {"Gender,Class,Extra\nMale,T,1\n", "Gender\nMale\n",
                             "Gender,Gender,Class\nMale,Male,T\n"}) {
        std::istringstream in(text);
        EXPECT_THROW(read_csv(in, s, RowPolicy::skip), ValidationError) << text;
    }
}

TEST(Csv, RoundTripIsIdentity)
{
    const auto s = default_survey_schema();
    const auto d = random_dataset(s, 300, 3);
    std::ostringstream out;
    write_csv(out, d);
    std::istringstream in(out.str());
    EXPECT_EQ(read_csv(in, s).data, d);

    // Three records round-trip back to the same level names.
    const auto small = random_dataset(s, 3, 4);
    std::ostringstream o2;
    write_csv(o2, small);
    std::istringstream i2(o2.str());
    const auto back = read_csv(i2, s).data;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t a = 0; a < s.size(); ++a) {
            EXPECT_EQ(s[a].levels[back.value(i, a)], s[a].levels[small.value(i, a)]);
        }
    }
}
