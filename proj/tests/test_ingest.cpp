#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "pindex/ingest.hpp"

using namespace pindex;

namespace {

const std::string header =
    "article_id,citations,author_count,author_position,x_override,s_override,explicit_partition,"
    "rank_override\n";

std::vector<ArticleRecord> csv(const std::string& body) {
    return parse_records(header + body, RecordFormat::csv);
}

template <typename F>
parse_error capture(F&& f) {
    try {
        f();
    } catch (const parse_error& e) {
        return e;
    }
    ADD_FAILURE() << "expected parse_error";
    return parse_error(0, 0, "none");
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST(ParseRecordsCsv, ExplicitPartitionRow) {
    const auto records = csv("a1,100,3,2,,,\"0.65;0.20;0.15\",\n");
    ASSERT_EQ(records.size(), 1u);
    const auto& r = records[0];
    EXPECT_EQ(r.article_id, "a1");
    EXPECT_EQ(r.citations, 100u);
    EXPECT_EQ(r.author_count, 3u);
    EXPECT_EQ(r.author_position, 2u);
    EXPECT_FALSE(r.x_override);
    EXPECT_FALSE(r.s_override);
    ASSERT_TRUE(r.explicit_partition);
    EXPECT_EQ(*r.explicit_partition, (std::vector<double>{0.65, 0.20, 0.15}));
    EXPECT_FALSE(r.rank_override);
}

TEST(ParseRecordsCsv, SingleAuthorZeroCitations) {
    const auto records = csv("a2,0,1,1,,,,\n");
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0].citations, 0u);
    EXPECT_EQ(records[0].author_count, 1u);
}

TEST(ParseRecordsCsv, PositionBeyondAuthorCount) {
    const auto e = capture([] { csv("a1,5,2,1,,,,\na3,10,3,4,,,,\n"); });
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 4u);
    EXPECT_TRUE(contains(e.what(), "author_position")) << e.what();
}

TEST(ParseRecordsCsv, OverridesAndCrlf) {
    const auto records = parse_records(
        header + "b1,12,3,1,0.25,2,,\r\nb2,7,4,2,,,,3\r\n\r\n", RecordFormat::csv);
    ASSERT_EQ(records.size(), 2u);
    EXPECT_EQ(records[0].x_override, 0.25);
    EXPECT_EQ(records[0].s_override, 2.0);
    EXPECT_EQ(records[1].rank_override, 3u);
}

TEST(ParseRecordsCsv, EmptyInputHasNoRecords) {
    EXPECT_TRUE(parse_records("", RecordFormat::csv).empty());
    EXPECT_TRUE(parse_records(header, RecordFormat::csv).empty());
}

TEST(ParseRecordsCsv, Errors) {
    auto e = capture([] { parse_records("id,citations\nx,1\n", RecordFormat::csv); });
    EXPECT_EQ(e.line(), 1u);

    e = capture([] { csv("a,1,2,1,,,,\nb,1,2,1,,,,\na,4,1,1,,,,\n"); });
    EXPECT_EQ(e.line(), 4u);
    EXPECT_TRUE(contains(e.what(), "line 2")) << e.what();
    EXPECT_TRUE(contains(e.what(), "line 4")) << e.what();

    e = capture([] { csv("a,-1,2,1,,,,\n"); });
    EXPECT_EQ(e.column(), 2u);
    e = capture([] { csv("a,1,two,1,,,,\n"); });
    EXPECT_EQ(e.column(), 3u);
    e = capture([] { csv("a,1,2,1,0.5,,,\n,1,1,1,,,,\n"); });
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 1u);
    e = capture([] { csv("a,1,3,1,,,\"0.5;0.3;0.3\",\n"); });
    EXPECT_EQ(e.column(), 7u);
    EXPECT_TRUE(contains(e.what(), "1.1")) << e.what();
    e = capture([] { csv("a,1,2,1,0.2,,\"0.5;0.5\",\n"); });
    EXPECT_EQ(e.column(), 7u);
    e = capture([] { csv("a,1,2,1,,,,3\n"); });
    EXPECT_EQ(e.column(), 8u);
    e = capture([] { csv("a,1,2,1,,,\n"); });
    EXPECT_EQ(e.line(), 2u);
    e = capture([] { csv("a,1,2,1,0,5,,,\n"); });
    EXPECT_EQ(e.line(), 2u);
    e = capture([] { csv("a,1,2,1,0.1,-1,,\n"); });
    EXPECT_EQ(e.column(), 6u);
    e = capture([] { csv("a,1,2,1,nan,,,\n"); });
    EXPECT_EQ(e.column(), 5u);
    e = capture([] { csv("\"a,1,2,1,,,,\n"); });
    EXPECT_EQ(e.line(), 2u);
}

TEST(ParseRecordsCsv, DecimalPointIgnoresLocale) {
    const auto records = csv("a,1,2,1,0.125,,,\n");
    EXPECT_EQ(records[0].x_override, 0.125);
    EXPECT_THROW(csv("a,1,2,1,\"0,125\",,,\n"), parse_error);
}

TEST(ParseRecordsJson, SameFieldsAsCsv) {
    const std::string text = R"([
  {"article_id": "a1", "citations": 100, "author_count": 3, "author_position": 2,
   "explicit_partition": [0.65, 0.20, 0.15]},
  {"article_id": "a2", "citations": 0, "author_count": 1, "author_position": 1,
   "x_override": null, "rank_override": null}
])";
    const auto records = parse_records(text, RecordFormat::json);
    EXPECT_EQ(records, csv("a1,100,3,2,,,\"0.65;0.20;0.15\",\na2,0,1,1,,,,\n"));
}

TEST(ParseRecordsJson, ErrorsCarryLinePositions) {
    auto e = capture([] {
        parse_records("[\n  {\"article_id\": \"a\", \"citations\": 1, \"author_count\": 2, "
                      "\"author_position\": 1},\n  {\"article_id\": \"b\", \"citations\": 1, "
                      "\"author_count\": 3, \"author_position\": 4}\n]",
                      RecordFormat::json);
    });
    EXPECT_EQ(e.line(), 3u);
    EXPECT_TRUE(contains(e.what(), "author_position")) << e.what();

    e = capture([] { parse_records("[\n  {\"article_id\": \"a\",,}\n]", RecordFormat::json); });
    EXPECT_EQ(e.line(), 2u);

    e = capture([] {
        parse_records(R"([{"article_id": "a", "citations": -4, "author_count": 1, "author_position": 1}])",
                      RecordFormat::json);
    });
    EXPECT_TRUE(contains(e.what(), "citations")) << e.what();

    e = capture([] {
        parse_records(R"([{"article_id": "a", "citations": 4, "author_count": 1, "author_position": 1, "color": 2}])",
                      RecordFormat::json);
    });
    EXPECT_TRUE(contains(e.what(), "color")) << e.what();

    EXPECT_THROW(parse_records(R"({"article_id": "a"})", RecordFormat::json), parse_error);
    EXPECT_TRUE(parse_records("", RecordFormat::json).empty());
    EXPECT_TRUE(parse_records("[]", RecordFormat::json).empty());
}

TEST(ParsePolicy, DemonstrationSchedule) {
    const auto policy = parse_policy(
        R"({"scheme":"bernstein","s":1,"schedule":{"1":0.0,"2":0.2,"3":0.25,"4":0.3,"5":0.35,"6":0.4,"7":0.45}})");
    EXPECT_EQ(policy.scheme, Scheme::bernstein);
    EXPECT_EQ(policy.s, 1.0);
    const auto demo = default_schedule(7);
    EXPECT_EQ(policy.schedule, demo.schedule);
    EXPECT_FALSE(policy.extension);
}

TEST(ParsePolicy, StretchedConfiguration) {
    const auto policy = parse_policy(R"({"scheme":"bernstein_s","s":2,"schedule":{"3":0.25}})");
    EXPECT_EQ(policy.scheme, Scheme::bernstein_s);
    EXPECT_EQ(policy.s, 2.0);
    const auto seq = make_psequence(3, policy);
    EXPECT_NEAR(seq.fractions[0], 0.7656, 5e-5);
}

TEST(ParsePolicy, ValueBeyondDomainNamesAuthorCount) {
    try {
        parse_policy(R"({"scheme":"bernstein","s":1,"schedule":{"2":1.5}})");
        FAIL() << "expected validation_error";
    } catch (const validation_error& e) {
        EXPECT_TRUE(contains(e.what(), "M=2")) << e.what();
    }
}

TEST(ParsePolicy, UnknownSchemeListsValidOnes) {
    try {
        parse_policy(R"({"scheme":"harmonic"})");
        FAIL() << "expected validation_error";
    } catch (const validation_error& e) {
        for (const char* name : {"bernstein", "bernstein_s", "uniform", "explicit"}) {
            EXPECT_TRUE(contains(e.what(), name)) << e.what();
        }
    }
}

TEST(ParsePolicy, ExtensionAndErrors) {
    const auto policy = parse_policy(
        R"({"scheme":"bernstein","schedule":{"1":0},"extension":{"slope":0.1,"intercept":0.0,"cap":0.4}})");
    ASSERT_TRUE(policy.extension);
    EXPECT_NEAR(*policy.resolve_x(3), 0.2, 1e-15);
    EXPECT_EQ(*policy.resolve_x(10), 0.4);

    EXPECT_THROW(parse_policy(R"({"scheme":"bernstein","extension":{"cap":2}})"), validation_error);
    EXPECT_THROW(parse_policy(R"({"schedule":{"zero":0.1}})"), validation_error);
    EXPECT_THROW(parse_policy(R"({"schedule":{"0":0.1}})"), validation_error);
    EXPECT_THROW(parse_policy(R"({"stretch":2})"), validation_error);
    EXPECT_THROW(parse_policy(R"({"scheme":"bernstein_s","s":-1})"), validation_error);
    EXPECT_THROW(parse_policy("{\n  \"scheme\": \n}"), parse_error);
}

// Properties.

namespace {

ArticleRecord random_record(std::mt19937_64& rng, std::size_t i) {
    std::uniform_int_distribution<unsigned> authors(1, 9);
    std::uniform_int_distribution<std::uint64_t> cites(0, 5000);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.3);
    ArticleRecord r;
    r.article_id = (i % 7 == 0 ? "id, with \"quotes\" " : "id") + std::to_string(i);
    r.citations = cites(rng);
    r.author_count = authors(rng);
    r.author_position = std::uniform_int_distribution<unsigned>(1, r.author_count)(rng);
    if (coin(rng)) {
        std::vector<double> w(r.author_count);
        double total = 0.0;
        for (auto& v : w) total += (v = 0.05 + unit(rng));
        for (auto& v : w) v /= total;
        r.explicit_partition = std::move(w);
    } else {
        if (coin(rng)) r.s_override = 0.1 + 3.0 * unit(rng);
        if (coin(rng)) r.x_override = unit(rng) * r.s_override.value_or(1.0);
    }
    if (coin(rng)) r.rank_override = std::uniform_int_distribution<unsigned>(1, r.author_count)(rng);
    return r;
}

} // namespace

TEST(IngestProperty, RecordRoundTrip) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ArticleRecord> records;
        for (std::size_t i = 0; i < static_cast<std::size_t>(trial % 15); ++i) {
            records.push_back(random_record(rng, i));
        }
        for (auto format : {RecordFormat::csv, RecordFormat::json}) {
            const auto text = serialize_records(records, format);
            ASSERT_EQ(parse_records(text, format), records) << text;
        }
    }
}

TEST(IngestProperty, PolicyRoundTrip) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        PartitionPolicy policy;
        policy.scheme = static_cast<Scheme>(trial % 4);
        if (policy.scheme == Scheme::bernstein_s || policy.scheme == Scheme::uniform) {
            policy.s = 0.1 + 3.0 * unit(rng);
        }
        const double upper = policy.effective_s();
        for (unsigned m = 1; m <= static_cast<unsigned>(trial % 9); ++m) {
            policy.schedule[m] = upper * unit(rng);
        }
        if (trial % 2) policy.extension = ScheduleExtension{unit(rng) * 0.1, unit(rng) * 0.2, upper * unit(rng)};
        ASSERT_EQ(parse_policy(serialize_policy(policy)), policy) << serialize_policy(policy);
    }
}

TEST(IngestProperty, EveryFieldMutationReportsItsLine) {
    const std::string body = "a1,100,3,2,,,\"0.65;0.20;0.15\",\nb2,40,4,1,0.3,,,2\nc3,9,1,1,,,,\n";
    const std::vector<std::vector<std::string>> bad_values{
        {""}, {"-3", "x", "1.5"}, {"0", "abc"}, {"0", "9"}, {"-1", "z"}, {"0", "y"}, {"1;1", "q"}, {"0", "7"},
    };
    // Split the three data lines into fields (the first one carries a quoted cell).
    const std::vector<std::vector<std::string>> rows{
        {"a1", "100", "3", "2", "", "", "\"0.65;0.20;0.15\"", ""},
        {"b2", "40", "4", "1", "0.3", "", "", "2"},
        {"c3", "9", "1", "1", "", "", "", ""},
    };
    ASSERT_EQ(csv(body).size(), 3u);
    int checked = 0;
    for (std::size_t row = 0; row < rows.size(); ++row) {
        for (std::size_t field = 0; field < 8; ++field) {
            for (const auto& replacement : bad_values[field]) {
                auto mutated = rows;
                mutated[row][field] = replacement;
                std::string text;
                for (const auto& r : mutated) {
                    for (std::size_t k = 0; k < r.size(); ++k) text += (k ? "," : "") + r[k];
                    text += '\n';
                }
                try {
                    csv(text);
                } catch (const parse_error& e) {
                    ++checked;
                    EXPECT_EQ(e.line(), row + 2) << e.what();
                    EXPECT_TRUE(contains(e.what(), "line " + std::to_string(row + 2))) << e.what();
                    continue;
                }
                // Some replacements are valid for some rows (e.g. blanking an
                // optional cell); those must parse cleanly.
            }
        }
    }
    EXPECT_GT(checked, 20);
}
