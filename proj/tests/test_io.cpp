#include <gtest/gtest.h>

#include <set>

#include "arrfq/constructions.hpp"
#include "arrfq/io.hpp"

using namespace arrfq;

namespace {

std::string dataPath(const std::string& name) { return std::string(ARRFQ_DATA_DIR) + "/" + name; }

const std::vector<AppendixEntry>& appendix()
{
    static const auto rows = ingestAppendix(readTextFile(dataPath("appendix.tex")));
    return rows;
}

FiniteField altF9() { return makeField(3, 2, std::vector<std::uint32_t>{2, 1, 1}); }

} // namespace

TEST(ArrangementFile, CounterexampleOverF4)
{
    const std::string text = "# twelve lines over F_4\n"
                             "field 2^2\n"
                             "1 1 0\n1 1 w\n0 0 1\n1 0 w\n0 1 w^2\n1 w^2 w^2\n"
                             "0 1 0\n1 1 1\n1 w^2 0\n1 w 0\n0 1 w\n1 w^2 w\n";
    const auto p = parseArrangementFile(text);
    EXPECT_TRUE(p.warnings.empty());
    EXPECT_EQ(p.arrangement.size(), 12u);
    EXPECT_EQ(p.arrangement, g25f4());
    EXPECT_TRUE(isSimplicial(p.arrangement));
}

TEST(ArrangementFile, TriangleAndTokens)
{
    const auto t = parseArrangementFile("field 3\n1 0 0\n0 1 0   # y = 0\n(0, 0, 1)\n").arrangement;
    EXPECT_EQ(t.size(), 3u);
    EXPECT_EQ(t.profile().size(), 3u);

    const auto A = parseArrangementFile("field 3^2 modulus 2,2,1\n1 0 w^5\n0 1 2\nw 1 0\n").arrangement;
    const auto F = makeField(3, 2);
    ASSERT_EQ(A.field(), F);
    const std::vector<Triple> want{{1, 0, F.omegaPow(5)}, {0, 1, 2}, {F.omegaPow(1), 1, 0}};
    EXPECT_EQ(A, Arrangement::fromNormals(F, want));

    const auto B = parseArrangementFile("field 9\n1 0 w^5\n").arrangement;
    EXPECT_EQ(B.field(), F);
}

TEST(ArrangementFile, DuplicatesWarn)
{
    const auto p = parseArrangementFile("field 5\n1 0 0\n0 1 0\n2 0 0\n0 0 1\n0 1 0\n");
    EXPECT_EQ(p.arrangement.size(), 3u);
    ASSERT_EQ(p.warnings.size(), 2u);
    EXPECT_NE(p.warnings[0].find("line 4"), std::string::npos);
    EXPECT_NE(p.warnings[0].find("line 2"), std::string::npos);
}

TEST(ArrangementFile, Errors)
{
    auto lineOf = [](const std::string& text) -> std::size_t {
        try {
            parseArrangementFile(text);
        } catch (const ParseError& e) {
            return e.where();
        }
        return 0;
    };
    EXPECT_EQ(lineOf("fields 3\n1 0 0\n"), 1u);
    EXPECT_EQ(lineOf("field 6\n1 0 0\n"), 1u);
    EXPECT_EQ(lineOf("field 3^2 modulus 1,1,1\n1 0 0\n"), 1u);
    EXPECT_EQ(lineOf("field 3^2 modulus 2,2\n1 0 0\n"), 1u);
    EXPECT_EQ(lineOf("# c\nfield 3\n1 0 0\n1 x 0\n"), 4u);
    EXPECT_EQ(lineOf("field 3\n1 0 0\n0 0 0\n"), 3u);
    EXPECT_EQ(lineOf("field 3\n1 0\n"), 2u);
    EXPECT_EQ(lineOf("field 3\n"), 1u);
    EXPECT_THROW(parseArrangementFile(""), ParseError);
    EXPECT_THROW(readArrangementFile("/nonexistent/file"), std::runtime_error);
}

TEST(ArrangementFile, RoundTrip)
{
    std::vector<Arrangement> samples{g25f4(), full3q(makeFieldOfOrder(8)), dB(makeField(7), {1, 2, 4}),
                                     ge13(makeFieldOfOrder(9), 4), nearPencil(makeField(5), 3)};
    samples.push_back(transportArrangement(ge13(makeFieldOfOrder(9), 4), altF9()));
    for (const auto& e : appendix()) samples.push_back(e.arrangement);
    for (const auto& A : samples) {
        const std::string text = writeArrangementFile(A);
        const auto back = parseArrangementFile(text);
        EXPECT_TRUE(back.warnings.empty());
        EXPECT_EQ(back.arrangement, A);
        EXPECT_EQ(writeArrangementFile(back.arrangement), text);
    }
    EXPECT_EQ(writeArrangementFile(parseArrangementFile("field 3\n0 0 2\n1 0 0\n").arrangement), "field 3\n1 0 0\n0 0 1\n");
}

TEST(GeneratorFile, Parse)
{
    const auto g = parseGeneratorFile("field 11\n# swap\n0 1 0\n1 0 0\n0 0 1\n\n0 1 0 0 0 1 1 0 0\n10 0 0\n0 1 0\n0 0 1\n");
    EXPECT_EQ(g.field.order(), 11u);
    ASSERT_EQ(g.generators.size(), 3u);
    EXPECT_EQ(g.generators, monomialSignGenerators(makeField(11)));
    EXPECT_THROW(parseGeneratorFile("field 5\n1 0 0\n0 1 0\n"), ParseError);
    EXPECT_THROW(parseGeneratorFile("field 5\n1 0 0\n0 1 0\n1 1 0\n"), ParseError);
    EXPECT_THROW(parseGeneratorFile("field 5\n"), ParseError);
    const auto shipped = parseGeneratorFile(readTextFile(dataPath("b3_q11.gens")));
    EXPECT_EQ(closure(shipped.field, shipped.generators).order(), 24u);
}

TEST(Appendix, RowsAndShapes)
{
    const auto& rows = appendix();
    ASSERT_EQ(rows.size(), 29u);
    EXPECT_EQ(rows.front().q, 5u);
    EXPECT_EQ(rows.front().arrangement.size(), 12u);
    EXPECT_EQ(rows.back().q, 13u);
    EXPECT_EQ(rows.back().arrangement.size(), 31u);
    EXPECT_EQ(tVector(rows.front().arrangement).str(), "2^7 3^13 5^2");
    EXPECT_EQ(rows.front().arrangement.profile().size(), 22u);
    EXPECT_EQ(tVector(rows.back().arrangement).str(), "2^48 3^64 6^15");
}

TEST(Appendix, MatchesPublishedTable)
{
    const auto table = parseSimCTable(readTextFile(dataPath("simC.csv")));
    ASSERT_EQ(table.size(), 29u);
    const auto checks = verifyAppendix(appendix(), table);
    for (const auto& c : checks) {
        std::string why;
        for (const auto& m : c.mismatches) why += m + "; ";
        EXPECT_TRUE(c.ok()) << "row " << c.row << ": " << why;
        EXPECT_TRUE(c.report.simplicial());
    }
    EXPECT_EQ(*checks[0].report.autOrder, 16u);
    EXPECT_EQ(*checks[1].report.autOrder, 12u);
}

TEST(Appendix, EqualInvariantsButDistinctIncidences)
{
    const auto& rows = appendix();
    // Rows 23-25: q = 9, 22 lines, 2^16 3^48 6^1 8^2. Rows 14-16: 18 lines, 2^15 3^22 4^12.
    for (auto group : {std::vector<std::size_t>{22, 23, 24}, std::vector<std::size_t>{13, 14, 15}}) {
        std::set<IncidenceCertificate> certs;
        std::set<std::string> tvs;
        for (auto i : group) {
            certs.insert(canonicalCertificate(IncidenceStructure::fromArrangement(rows[i].arrangement)));
            tvs.insert(tVector(rows[i].arrangement).str());
        }
        EXPECT_EQ(tvs.size(), 1u);
        EXPECT_EQ(certs.size(), 3u);
    }
}

TEST(Appendix, Errors)
{
    const std::string text = readTextFile(dataPath("appendix.tex"));
    EXPECT_THROW(ingestAppendix(text, 28), std::invalid_argument);
    EXPECT_EQ(ingestAppendix(text, std::nullopt).size(), 29u);
    try {
        ingestAppendix("$q=5$, $\\{(1,0,0)$, $(0,1,0)\\}$, \\\\ $q=7$, $\\{(1,0,\\nu)\\}$", 2);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.where(), 2u);
    }
    EXPECT_THROW(ingestAppendix("$q=6$, $\\{(1,0,0)\\}$", 1), ParseError);
    EXPECT_THROW(ingestAppendix("$q=5$, $\\{(1,0)\\}$", 1), ParseError);
    EXPECT_THROW(ingestAppendix("$q=5$, $\\{(1,0,0), (2,0,0)\\}$", 1), ParseError);
}

TEST(Appendix, ModulusIndependenceAtNine)
{
    const auto G = altF9();
    std::size_t checked = 0, literalDiffers = 0;
    const auto literal = ingestAppendix(readTextFile(dataPath("appendix.tex")), 29,
                                        [&](std::uint32_t q) { return q == 9 ? G : makeFieldOfOrder(q); });
    for (std::size_t i = 0; i < appendix().size(); ++i) {
        const auto& A = appendix()[i].arrangement;
        if (A.q() != 9) continue;
        const auto B = transportArrangement(A, G);
        ASSERT_EQ(B.field(), G);
        const auto ra = invariantReport(A, true), rb = invariantReport(B, true);
        EXPECT_EQ(toJson(ra), toJson(rb)) << "row " << i + 1;
        EXPECT_TRUE(isIncidenceIsomorphic(IncidenceStructure::fromArrangement(A), IncidenceStructure::fromArrangement(B)));
        ++checked;
        // Reading the tokens w^j as powers of a root of the other modulus is not a field isomorphism.
        if (invariantReport(literal[i].arrangement).tVector != ra.tVector) ++literalDiffers;
    }
    EXPECT_EQ(checked, 10u);
    EXPECT_GT(literalDiffers, 0u);
}

TEST(Report, SmallCases)
{
    const auto F3 = makeField(3);
    const auto tri = Arrangement::fromNormals(F3, std::vector<Triple>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const auto r = invariantReport(tri, true);
    EXPECT_TRUE(r.simplicial());
    EXPECT_EQ(*r.chambers, 8);
    EXPECT_EQ(*r.autOrder, 6u);
    EXPECT_TRUE(r.reducible);
    const auto j = toJson(r);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"q", "lineCount", "pointCount", "n0", "n1", "tVector", "tVectorText",
                                              "essential", "chiCoefficients", "chambers", "simplicial", "reducible",
                                              "autOrder"}));
    EXPECT_EQ(j["simplicial"]["byChi"], true);
    EXPECT_EQ(j["chiCoefficients"], nlohmann::ordered_json({1, -3, 3, -1}));
    EXPECT_EQ(toCsvRow(r), "3,3,3,4,6,2^3,1 -3 3 -1,8,true,true,true,true,6");

    const auto d = invariantReport(dB(makeField(5), {}));
    EXPECT_EQ(d.n0, 0u);
    EXPECT_EQ(d.n1, 15u);
    EXPECT_TRUE(d.simplicial());
    EXPECT_FALSE(d.reducible);
    EXPECT_TRUE(toJson(d)["autOrder"].is_null());

    const auto pencil = invariantReport(Arrangement::fromNormals(F3, std::vector<Triple>{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}));
    EXPECT_FALSE(pencil.essential);
    EXPECT_FALSE(pencil.simplicial());
    EXPECT_TRUE(toJson(pencil)["chambers"].is_null());
    const std::string header = csvHeader(), row = toCsvRow(d);
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}

TEST(Report, CensusJson)
{
    const auto c = enumerateSimplicial(3);
    const auto j = censusJson(c);
    EXPECT_EQ(j["q"], 3);
    EXPECT_EQ(j["pgl"]["9"], 1);
    EXPECT_EQ(j["incidence"]["9"], 1);
    const std::string rep = j["representatives"]["9"][0];
    EXPECT_TRUE(isIncidenceIsomorphic(IncidenceStructure::fromArrangement(parseArrangementFile(rep).arrangement),
                                      IncidenceStructure::fromArrangement(full3q(makeField(3)))));
}
