// Command-line front end. Exit status: 0 when the verdict holds (or the
// command simply succeeded), 1 when it does not, 2 on any error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arrfq/arrfq.hpp"

using namespace arrfq;

namespace {

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;

ParsedArrangement load(const std::string& path)
{
    auto p = readArrangementFile(path);
    for (const auto& w : p.warnings) std::cerr << path << ": warning: " << w << "\n";
    return p;
}

void printReport(const InvariantReport& r)
{
    std::cout << "q           " << r.q << "\n"
              << "lines       " << r.lineCount << "\n"
              << "points      " << r.pointCount << "\n"
              << "n0 n1       " << r.n0 << " " << r.n1 << "\n"
              << "t-vector    " << r.tVector.str() << "\n";
    if (r.chi) {
        const auto& c = r.chi->c;
        std::cout << "chi         t^3 + (" << c[1] << ")t^2 + (" << c[2] << ")t + (" << c[3] << ")\n"
                  << "chambers    " << *r.chambers << "\n";
    } else {
        std::cout << "essential   no\n";
    }
    std::cout << "simplicial  " << (r.simplicial() ? "yes" : "no") << "\n"
              << "reducible   " << (r.reducible ? "yes" : "no") << "\n";
    if (r.autOrder) std::cout << "|Aut(I)|    " << *r.autOrder << "\n";
}

std::string sizesText(std::vector<std::size_t> sizes)
{
    std::sort(sizes.begin(), sizes.end());
    std::string s;
    for (auto x : sizes) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

std::string dataDir() { return ARRFQ_DATA_DIR; }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simplicial line arrangements over finite fields"};
    app.require_subcommand(1);
    int status = kTrue;

    // check
    auto* check = app.add_subcommand("check", "Decide simpliciality of an arrangement file");
    std::string checkFile;
    check->add_option("file", checkFile)->required();
    check->callback([&] {
        const auto A = load(checkFile).arrangement;
        const auto r = invariantReport(A);
        std::cout << (r.simplicial() ? "simplicial" : "not simplicial") << " (" << r.lineCount << " lines over F_" << r.q
                  << ")\n";
        status = r.simplicial() ? kTrue : kFalse;
    });

    // invariants
    auto* inv = app.add_subcommand("invariants", "Print the invariants of an arrangement file");
    std::string invFile;
    bool invJson = false, invAut = false;
    inv->add_option("file", invFile)->required();
    inv->add_flag("--json", invJson, "JSON output");
    inv->add_flag("--aut", invAut, "Also compute |Aut| of the incidence");
    inv->callback([&] {
        const auto r = invariantReport(load(invFile).arrangement, invAut);
        if (invJson) std::cout << toJson(r).dump(2) << "\n";
        else printReport(r);
    });

    // construct
    auto* cons = app.add_subcommand("construct", "Write an arrangement file for a named family");
    std::string kind;
    std::uint32_t consQ = 0, consK = 0, consE = 0;
    std::vector<std::string> consB;
    std::uint64_t consSeed = 1;
    cons->add_option("kind", kind, "near-pencil | dB | full3q | ge13 | max-deletion | g25f4")
        ->required()
        ->check(CLI::IsMember({"near-pencil", "dB", "full3q", "ge13", "max-deletion", "g25f4"}));
    cons->add_option("--q", consQ, "Field order");
    cons->add_option("--k", consK, "near-pencil: number of concurrent lines");
    cons->add_option("--b", consB, "dB: elements of B as field tokens")->delimiter(',');
    cons->add_option("--e", consE, "ge13: order of the subgroup");
    cons->add_option("--seed", consSeed, "max-deletion: random seed");
    cons->callback([&] {
        if (kind == "g25f4") {
            std::cout << writeArrangementFile(g25f4());
            return;
        }
        if (consQ == 0) throw std::invalid_argument("construct " + kind + " needs --q");
        const auto F = makeFieldOfOrder(consQ);
        Arrangement A;
        if (kind == "near-pencil") A = nearPencil(F, consK ? consK : consQ + 1);
        else if (kind == "dB") {
            std::vector<Elem> B;
            for (const auto& t : consB) B.push_back(parseToken(F, t));
            A = dB(F, B);
        } else if (kind == "full3q") A = full3q(F);
        else if (kind == "ge13") A = ge13(F, consE ? consE : consQ - 1);
        else {
            std::mt19937_64 rng(consSeed);
            A = maxDeletion(F, randomDeletionPattern(F, rng));
        }
        std::cout << writeArrangementFile(A);
    });

    // enumerate
    auto* en = app.add_subcommand("enumerate", "Census of simplicial arrangements over F_q (q <= 5)");
    std::uint32_t enQ = 0;
    std::optional<std::uint32_t> enMax;
    std::string enUpTo = "pgl";
    unsigned enJobs = 1;
    en->add_option("--q", enQ)->required();
    en->add_option("--max-lines", enMax);
    en->add_option("--up-to", enUpTo)->check(CLI::IsMember({"pgl", "incidence"}));
    en->add_option("--jobs", enJobs)->check(CLI::PositiveNumber);
    en->callback([&] {
        const auto c = enumerateSimplicial(enQ, enMax, enUpTo == "pgl" ? UpTo::Pgl : UpTo::Incidence, enJobs);
        std::cout << censusJson(c).dump(2) << "\n";
    });

    // polya
    auto* po = app.add_subcommand("polya", "Number of k-line arrangements up to PGL_3(F_q)");
    std::uint32_t poQ = 0;
    std::optional<std::uint32_t> poMax;
    unsigned poJobs = 1;
    po->add_option("--q", poQ)->required();
    po->add_option("--max-k", poMax);
    po->add_option("--jobs", poJobs)->check(CLI::PositiveNumber);
    po->callback([&] {
        const auto c = polyaPolynomial(poQ, poMax, poJobs);
        mpz_class all = 0, upTo3q = 0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            std::cout << k << " " << c[k] << "\n";
            all += c[k];
            if (k <= 3 * poQ) upTo3q += c[k];
        }
        std::cout << "total " << all << "\n"
                  << "total<=3q " << upTo3q << "\n";
    });

    // orbit-search
    auto* os = app.add_subcommand("orbit-search", "Simplicial unions of line orbits of a group");
    std::uint32_t osQ = 0;
    std::string osGens;
    std::optional<std::uint32_t> osMin, osMax;
    std::size_t osMaxOrbits = 20;
    os->add_option("--q", osQ)->required();
    os->add_option("--gens", osGens, "Generator file")->required();
    os->add_option("--min-lines", osMin);
    os->add_option("--max-lines", osMax);
    os->add_option("--max-orbits", osMaxOrbits);
    os->callback([&] {
        const auto g = parseGeneratorFile(readTextFile(osGens));
        if (g.field.order() != osQ)
            throw std::invalid_argument("generator file is over F_" + std::to_string(g.field.order()) + ", not F_" +
                                        std::to_string(osQ));
        const auto G = closure(g.field, g.generators);
        const auto found = orbitUnionSearch(G, osMin, osMax, osMaxOrbits);
        std::cout << "group order " << G.order() << ", " << found.size() << " simplicial unions\n";
        for (const auto& u : found) {
            std::cout << "\n# " << u.arrangement.size() << " lines, orbit sizes " << sizesText(u.orbitSizes)
                      << ", t-vector " << tVector(u.arrangement).str() << "\n"
                      << writeArrangementFile(u.arrangement);
        }
        status = found.empty() ? kFalse : kTrue;
    });

    // iso
    auto* iso = app.add_subcommand("iso", "Test two arrangement files for isomorphic incidences");
    std::string isoA, isoB;
    iso->add_option("file1", isoA)->required();
    iso->add_option("file2", isoB)->required();
    iso->callback([&] {
        const auto A = load(isoA).arrangement, B = load(isoB).arrangement;
        const auto f = isIncidenceIsomorphic(IncidenceStructure::fromArrangement(A), IncidenceStructure::fromArrangement(B));
        if (!f) {
            std::cout << "not isomorphic\n";
            status = kFalse;
            return;
        }
        std::cout << "isomorphic\n";
        for (std::size_t i = 0; i < f->size(); ++i) std::cout << "  line " << i << " -> " << (*f)[i] << "\n";
    });

    // aut
    auto* aut = app.add_subcommand("aut", "Order of the automorphism group of the incidence");
    std::string autFile;
    aut->add_option("file", autFile)->required();
    aut->callback([&] { std::cout << autGroupOrder(IncidenceStructure::fromArrangement(load(autFile).arrangement)) << "\n"; });

    // reflection
    auto* refl = app.add_subcommand("reflection", "Simpliciality of free reflection arrangements");
    refl->require_subcommand(1);
    auto* gedr = refl->add_subcommand("gedr", "The group G(e,d,r)");
    std::uint32_t rE = 0, rD = 0, rR = 0;
    gedr->add_option("--e", rE)->required();
    gedr->add_option("--d", rD)->required();
    gedr->add_option("--r", rR)->required();
    gedr->callback([&] {
        const auto s = gedrSpec(rE, rD, rR);
        std::cout << s.name << ": " << s.hyperplaneCount() << " hyperplanes, exponents";
        for (auto x : s.exponents) std::cout << " " << x;
        std::cout << "; restriction";
        for (auto x : s.hyperplaneOrbits.front().restrictionExponents) std::cout << " " << x;
        const bool v = simplicialFree(s);
        if (v != gedrSimplicialClosedForm(rE, rD, rR)) throw std::logic_error("closed form disagrees with evaluation");
        std::cout << "\n" << (v ? "simplicial" : "not simplicial") << "\n";
        status = v ? kTrue : kFalse;
    });
    auto* table = refl->add_subcommand("table", "Verdicts for every group in a data file");
    std::string tableFile = dataDir() + "/exceptional_groups.txt";
    table->add_option("data-file", tableFile);
    table->callback([&] {
        std::ifstream in(tableFile);
        if (!in) throw std::runtime_error("cannot open " + tableFile);
        for (const auto& v : exceptionalReport(parseReflectionData(in)))
            std::cout << v.name << " " << v.hyperplanes << " " << (v.simplicial ? "simplicial" : "not-simplicial") << " "
                      << v.defect << "\n";
    });

    // verify-a2n1
    auto* a2 = app.add_subcommand("verify-a2n1", "Compare D_empty over F_q with A(2q,1) exactly");
    std::uint32_t a2Q = 0;
    std::optional<std::uint32_t> a2Shift;
    a2->add_option("--q", a2Q)->required();
    a2->add_option("--shift", a2Shift, "Index shift for the quadric lines (default (q-1)/2)");
    a2->callback([&] {
        const auto r = verifyPhi(a2Q, a2Shift);
        std::cout << "shift " << r.shift << ", " << r.triplesChecked << " triples, " << r.concurrentTriples
                  << " concurrent, " << r.mismatches << " mismatches\n"
                  << (r.isomorphic ? "isomorphic" : "not isomorphic") << "\n";
        status = r.isomorphic ? kTrue : kFalse;
    });

    // appendix
    auto* ap = app.add_subcommand("appendix", "Ingest the appendix arrangements");
    bool apVerify = false;
    std::string apDir = dataDir();
    ap->add_flag("--verify", apVerify, "Check every row against the published table");
    ap->add_option("--data", apDir, "Directory with appendix.tex and simC.csv");
    ap->callback([&] {
        const auto entries = ingestAppendix(readTextFile(apDir + "/appendix.tex"));
        if (!apVerify) {
            for (const auto& e : entries)
                std::cout << "# row " << e.row << "\n" << writeArrangementFile(e.arrangement) << "\n";
            return;
        }
        const auto checks = verifyAppendix(entries, parseSimCTable(readTextFile(apDir + "/simC.csv")));
        std::size_t bad = 0;
        for (const auto& c : checks) {
            std::cout << "row " << c.row << " q=" << c.report.q << " |A|=" << c.report.lineCount
                      << " |P|=" << c.report.pointCount << " " << c.report.tVector.str() << " |Aut|=" << *c.report.autOrder
                      << (c.ok() ? " ok" : " MISMATCH");
            for (const auto& m : c.mismatches) std::cout << " [" << m << "]";
            std::cout << "\n";
            bad += !c.ok();
        }
        std::cout << checks.size() - bad << "/" << checks.size() << " rows match\n";
        status = bad ? kFalse : kTrue;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return status;
}
