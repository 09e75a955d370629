#include <gtest/gtest.h>

#include <random>
#include <set>

#include "arrfq/constructions.hpp"
#include "arrfq/incidence.hpp"

using namespace arrfq;

namespace {

void expectSimplicial(const Arrangement& A)
{
    EXPECT_TRUE(simplicialByPoints(A));
    EXPECT_TRUE(simplicialByCount(A));
    EXPECT_TRUE(simplicialByChi(A));
}

// Classes of subsets B of F_q^x under B -> zB, found by direct orbit enumeration.
std::uint64_t scalingOrbits(std::uint32_t q)
{
    const auto F = makeFieldOfOrder(q);
    std::set<std::set<Elem>> seen;
    std::uint64_t orbits = 0;
    for (std::uint32_t bits = 0; bits < 1u << (q - 1); ++bits) {
        std::set<Elem> B;
        for (std::uint32_t i = 0; i < q - 1; ++i)
            if (bits >> i & 1) B.insert(i + 1);
        if (seen.count(B)) continue;
        ++orbits;
        for (Elem z = 1; z < q; ++z) {
            std::set<Elem> zB;
            for (auto b : B) zB.insert(F.mul(z, b));
            seen.insert(zB);
        }
    }
    return orbits;
}

IncidenceStructure cycloIncidence(const std::vector<CycloTriple>& normals)
{
    return IncidenceStructure::fromConcurrency(static_cast<std::uint32_t>(normals.size()),
                                               [&](std::uint32_t i, std::uint32_t j, std::uint32_t k) {
                                                   return cycloDet3(normals[i], normals[j], normals[k]).isZero();
                                               });
}

} // namespace

TEST(NearPencil, SizesAndSimpliciality)
{
    const auto F3 = makeField(3);
    EXPECT_EQ(nearPencil(F3, 2).size(), 3u);
    expectSimplicial(nearPencil(F3, 2));
    const auto A = nearPencil(F3, 4);
    EXPECT_EQ(A.size(), 5u);
    EXPECT_TRUE(isNearPencil(A));
    expectSimplicial(A);
    for (std::uint32_t q : {4u, 5u, 7u, 8u}) {
        const auto B = nearPencil(makeFieldOfOrder(q), q + 1);
        EXPECT_EQ(B.size(), q + 2);
        expectSimplicial(B);
    }
    EXPECT_THROW(nearPencil(F3, 1), std::invalid_argument);
    EXPECT_THROW(nearPencil(F3, 5), std::invalid_argument);
}

TEST(DB, EmptyAndSmallB)
{
    const auto F5 = makeField(5);
    const auto A = dB(F5, {});
    EXPECT_EQ(A.size(), 10u);
    EXPECT_EQ(A.profile().n0, 0u);
    EXPECT_EQ(A.profile().n1, 15u);
    expectSimplicial(A);
    const auto B = dB(F5, {1, 3});
    EXPECT_EQ(B.size(), 12u);
    EXPECT_EQ(B.profile().n1, 9u);
    expectSimplicial(dB(makeFieldOfOrder(4), {}));
    EXPECT_THROW(dB(F5, {0}), std::invalid_argument);
}

TEST(DB, EveryChoiceIsSimplicialForOddQ)
{
    for (std::uint32_t q : {3u, 5u, 7u, 9u}) {
        const auto F = makeFieldOfOrder(q);
        for (std::uint32_t bits = 0; bits < 1u << (q - 1); ++bits) {
            std::vector<Elem> B;
            for (std::uint32_t i = 0; i < q - 1; ++i)
                if (bits >> i & 1) B.push_back(i + 1);
            const auto A = dB(F, B);
            ASSERT_EQ(A.size(), 2 * q + B.size());
            EXPECT_EQ(A.profile().n1, q * (q + 1) / 2 - B.size() * (q + 1) / 2) << q << " " << bits;
            expectSimplicial(A);
        }
    }
}

TEST(DB, ClassCounts)
{
    EXPECT_EQ(dBClassCount(3), 3u);
    EXPECT_EQ(dBClassCount(5), 6u);
    EXPECT_EQ(dBClassCount(7), 14u);
    EXPECT_EQ(dBClassCount(9), 36u);
    for (std::uint32_t q : {3u, 5u, 7u, 9u, 11u, 13u}) EXPECT_EQ(dBClassCount(q), scalingOrbits(q)) << q;
    for (std::uint32_t q : {3u, 5u, 7u}) EXPECT_EQ(dBClassesByCanonicalForm(q), dBClassCount(q)) << q;
    EXPECT_THROW(dBClassCount(4), std::invalid_argument);
}

TEST(DB, MinImageAgreesOnFive)
{
    const auto F5 = makeField(5);
    std::set<std::vector<std::uint32_t>> forms;
    for (std::uint32_t bits = 0; bits < 16; ++bits) {
        std::vector<Elem> B;
        for (std::uint32_t i = 0; i < 4; ++i)
            if (bits >> i & 1) B.push_back(i + 1);
        forms.insert(canonicalUnderPGL(dB(F5, B)));
    }
    EXPECT_EQ(forms.size(), 6u);
}

TEST(MaxDeletion, RandomPatternsGiveSimplicial3q)
{
    std::mt19937_64 rng(2024);
    for (std::uint32_t q : {3u, 4u, 5u, 7u}) {
        const auto F = makeFieldOfOrder(q);
        for (int trial = 0; trial < 25; ++trial) {
            const auto A = maxDeletion(F, randomDeletionPattern(F, rng));
            EXPECT_EQ(A.size(), 3 * q);
            EXPECT_EQ(A.profile().n0, 0u);
            EXPECT_EQ(A.profile().n1, 0u);
            expectSimplicial(A);
            EXPECT_TRUE(hasMaxDeletionShape(A));
        }
    }
}

TEST(MaxDeletion, CoordinateChoiceGivesFull3q)
{
    for (std::uint32_t q : {3u, 4u, 5u, 7u}) {
        const auto F = makeFieldOfOrder(q);
        const auto P = ProjectivePlane::of(F);
        const ProjLine H{{1, 0, 0}};
        std::vector<ProjPoint> pts;
        std::vector<std::vector<ProjLine>> removals;
        for (Elem z = 1; z < q; ++z) {
            const ProjPoint p{{0, 1, z}};
            pts.push_back(p);
            const std::uint32_t kept = P->indexOf(Triple{0, 1, F.neg(F.inv(z))});
            std::vector<ProjLine> rem;
            for (auto l : P->linesThroughPoint(P->indexOf(p)))
                if (l != P->indexOf(H) && l != kept) rem.push_back(P->line(l));
            removals.push_back(rem);
        }
        EXPECT_EQ(maxDeletion(F, H, pts, removals), full3q(F)) << q;
    }
}

TEST(MaxDeletion, RejectsBadPatterns)
{
    const auto F = makeField(3);
    const ProjLine H{{1, 0, 0}};
    const std::vector<ProjPoint> pts{{{0, 1, 1}}, {{0, 1, 2}}};
    EXPECT_THROW(maxDeletion(F, H, {{{0, 1, 1}}}, {{}}), std::invalid_argument);
    EXPECT_THROW(maxDeletion(F, H, {{{1, 0, 0}}, {{0, 1, 2}}}, {{}, {}}), std::invalid_argument);
    EXPECT_THROW(maxDeletion(F, H, pts, {{H, ProjLine{{0, 1, 2}}}, {ProjLine{{0, 1, 1}}, ProjLine{{1, 1, 1}}}}),
                 std::invalid_argument);
    EXPECT_THROW(maxDeletion(F, H, pts, {{ProjLine{{1, 0, 0}}}, {}}), std::invalid_argument);
}

TEST(Full3q, TVector)
{
    for (std::uint32_t q : {3u, 4u, 5u, 7u, 8u, 9u}) {
        const auto A = full3q(makeFieldOfOrder(q));
        EXPECT_EQ(A.size(), 3 * q);
        const std::string want = "2^" + std::to_string(3 * (q - 1)) + " 3^" + std::to_string((q - 1) * (q - 1)) +
                                 " " + std::to_string(q + 1) + "^3";
        EXPECT_EQ(tVector(A).str(), want) << q;
        expectSimplicial(A);
        EXPECT_TRUE(hasMaxDeletionShape(A));
    }
}

TEST(Ge13, CountsAndIncidence)
{
    const auto A = ge13(makeField(7), 3);
    EXPECT_EQ(A.size(), 12u);
    expectSimplicial(A);
    EXPECT_EQ(ge13(makeField(5), 4), full3q(makeField(5)));
    EXPECT_THROW(ge13(makeField(7), 4), std::invalid_argument);
    for (std::uint32_t q : {3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u})
        for (std::uint32_t e = 1; e <= q - 1; ++e) {
            if ((q - 1) % e) continue;
            const auto B = ge13(makeFieldOfOrder(q), e);
            EXPECT_EQ(B.size(), 3 * e + 3);
            expectSimplicial(B);
        }
    const std::map<std::uint32_t, std::vector<std::uint32_t>> fields{{2, {3, 5, 7, 9}}, {3, {4, 7, 13}}, {4, {5, 9, 13}}};
    for (const auto& [e, qs] : fields) {
        const auto I0 = IncidenceStructure::fromArrangement(ge13(makeFieldOfOrder(qs[0]), e));
        for (std::size_t i = 1; i < qs.size(); ++i)
            EXPECT_TRUE(isIncidenceIsomorphic(I0, IncidenceStructure::fromArrangement(ge13(makeFieldOfOrder(qs[i]), e))))
                << e << " " << qs[i];
    }
    EXPECT_TRUE(isIncidenceIsomorphic(IncidenceStructure::fromArrangement(full3q(makeFieldOfOrder(4))),
                                      IncidenceStructure::fromArrangement(ge13(makeField(7), 3))));
}

TEST(Ge13, NormalSignMattersWhenMinusOneIsOutsideTheSubgroup)
{
    // Normals (1,a,0), (1,0,a), (0,1,a) with a in {0,1,2,4} <= F_7.
    const auto F = makeField(7);
    std::vector<Triple> normals{{0, 0, 1}};
    for (Elem a : {0u, 1u, 2u, 4u}) {
        normals.push_back({1, a, 0});
        normals.push_back({1, 0, a});
        normals.push_back({0, 1, a});
    }
    const auto A = Arrangement::fromNormals(F, normals);
    EXPECT_EQ(A.size(), 12u);
    EXPECT_FALSE(isSimplicial(A));
    // With -1 in the subgroup both sign conventions give the same set.
    std::vector<Triple> plus{{0, 0, 1}};
    for (Elem a : {0u, 1u, 6u}) {
        plus.push_back({1, a, 0});
        plus.push_back({1, 0, a});
        plus.push_back({0, 1, a});
    }
    EXPECT_EQ(Arrangement::fromNormals(F, plus), ge13(F, 2));
}

TEST(G25F4, SimplicialButNotFromMaxDeletion)
{
    const auto A = g25f4();
    EXPECT_EQ(A.size(), 12u);
    EXPECT_EQ(A.profile().n0, 0u);
    EXPECT_EQ(A.profile().n1, 0u);
    expectSimplicial(A);
    EXPECT_FALSE(hasMaxDeletionShape(A));
    EXPECT_EQ(tVector(A).str(), "2^12 4^9");
}

TEST(A2n1, Normals)
{
    // For n = 2 every side normal is a multiple of (0,0,1).
    const auto N2 = a2n1Normals(2);
    EXPECT_TRUE(N2[0][0].isZero() && N2[0][1].isZero() && N2[1][0].isZero() && N2[1][1].isZero());
    for (int n = 3; n <= kMaxA2n1; ++n) {
        const auto N = a2n1Normals(n);
        ASSERT_EQ(N.size(), static_cast<std::size_t>(2 * n));
        const auto& K = N[0][0].field();
        EXPECT_EQ(N[n][0], K.zero());
        EXPECT_EQ(N[n][1], K.zero());
        EXPECT_EQ(N[n][2], -K.one());
        const auto s2 = trig(n, TrigKind::Sin, 2);
        for (int m = 0; m < n; ++m) EXPECT_EQ(N[m][0], -s2) << n << " " << m;
        // Pairwise non-proportional: some 2x2 minor is nonzero.
        for (std::size_t i = 0; i < N.size(); ++i)
            for (std::size_t j = i + 1; j < N.size(); ++j) {
                bool distinct = false;
                for (int a = 0; a < 3 && !distinct; ++a)
                    for (int b = a + 1; b < 3 && !distinct; ++b)
                        distinct = !(N[i][a] * N[j][b] - N[i][b] * N[j][a]).isZero();
                EXPECT_TRUE(distinct) << n << " " << i << " " << j;
            }
    }
    EXPECT_THROW(a2n1Normals(14), CapExceeded);
    EXPECT_THROW(a2n1Normals(1), CapExceeded);
}

TEST(VerifyPhi, SmallPrimes)
{
    for (std::uint32_t q : {3u, 5u, 7u}) {
        const auto r = verifyPhi(q);
        EXPECT_TRUE(r.isomorphic) << q;
        EXPECT_EQ(r.triplesChecked, (2 * q) * (2 * q - 1) * (2 * q - 2) / 6);
        EXPECT_EQ(r.mismatches, 0u);
        EXPECT_GT(r.concurrentTriples, 0u);
    }
    EXPECT_TRUE(verifyPhi(3, 1).isomorphic);
    EXPECT_FALSE(verifyPhi(5, 1).isomorphic);
    EXPECT_FALSE(verifyPhi(7, 1).isomorphic);
    EXPECT_TRUE(verifyPhi(11).isomorphic);
    EXPECT_THROW(verifyPhi(9), std::invalid_argument);
    EXPECT_THROW(verifyPhi(2), std::invalid_argument);
}

TEST(VerifyPhi, IncidenceIsomorphismOverSeven)
{
    const auto D = IncidenceStructure::fromArrangement(dB(makeField(7), {}));
    const auto R = cycloIncidence(a2n1Normals(7));
    EXPECT_TRUE(isIncidenceIsomorphic(D, R));
    EXPECT_EQ(autGroupOrder(D), autGroupOrder(R));
}
