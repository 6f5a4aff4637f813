// Acceptance suite: one pass/fail line per criterion, exact comparisons
// throughout, stated runtime caps enforced.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "keanelab/config.hpp"

using namespace keanelab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void criterion(int num, const std::string& title, double limit_seconds,
               const std::function<std::string()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (pass && limit_seconds > 0 && secs > limit_seconds) {
        pass = false;
        detail += " [exceeded runtime cap]";
    }
    if (!pass) ++failures;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (pass ? "PASS" : "FAIL") << "  criterion " << num << " (" << secs << " s): " << title;
    if (!detail.empty()) line << " -- " << detail;
    std::cout << line.str() << "\n";
}

void require(bool cond, const std::string& what) {
    if (!cond) throw Error("check failed: " + what);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("missing report file " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Rational rat(const char* s) { return Rational::parse(s); }

}  // namespace

int main() {
    const ParamSeq minimal4 = generate(SequenceKind::Minimal, 4);
    const ParamSeq minimal6 = generate(SequenceKind::Minimal, 6);
    const ParamSeq theorem3_6 = generate(SequenceKind::Theorem3, 6, Rational(2));
    const ParamSeq theorem4_3 = generate(SequenceKind::Theorem4, 3);
    const ParamSeq corollary5 = generate(SequenceKind::Corollary1, 5);

    criterion(1, "landing-pattern exactness at K=4, k=1,2 (minimal)", 60, [&] {
        const LandingReport r1 = verify_landing_pattern(minimal4, 4, 1);
        require(r1.holds && r1.actual == keane_matrix(BigInteger(33), BigInteger(10)), "k=1 visit matrix == A_{33,10}");
        const LandingReport r2 = verify_landing_pattern(minimal4, 4, 2);
        require(r2.holds && r2.actual == keane_matrix(BigInteger(198), BigInteger(65)), "k=2 visit matrix == A_{198,65}");
        return "visit matrices equal A_{33,10} and A_{198,65} entrywise";
    });

    criterion(2, "Theorem-1 validation (minimal binding; theorem4 fails n_1 >= 10)", 1, [&] {
        const ValidationReport rm = validate_sequence(minimal4);
        require(rm.fully_valid(), "minimal sequence valid");
        for (const auto& c : rm.checks) {
            require(c.lower_binding, "3(n_k+1) = m_k binding at k=" + std::to_string(c.k));
            if (c.upper_ok) require(c.upper_binding, "2m_k = n_{k+1}+1 binding at k=" + std::to_string(c.k));
        }
        const ValidationReport rt = validate_sequence(theorem4_3);
        require(rt.ratios_ok(), "theorem4 ratio inequalities hold for k <= 3");
        require(!rt.n1_ok, "theorem4 n_1 = 9 fails n_1 >= 10");
        return "minimal binding on both sides; theorem4 ratios hold, n_1 check fails as computed";
    });

    criterion(3, "mass sandwich (Lemmas 9-10) with spot b_{2,2} = 9439", 1, [&] {
        for (int k = 1; k <= 4; ++k) {
            const auto [lo, hi] = mass_bounds(minimal4, k);
            const BigInteger b = column_mass(minimal4, k, 2);
            require(lo <= b && b <= hi, "minimal sandwich at k=" + std::to_string(k));
        }
        for (int k = 1; k <= 3; ++k) {
            const auto [lo, hi] = mass_bounds(theorem4_3, k);
            const BigInteger b = column_mass(theorem4_3, k, 2);
            require(lo <= b && b <= hi, "theorem4 sandwich at k=" + std::to_string(k));
        }
        require(column_mass(minimal4, 2, 2) == BigInteger(9439), "b_{2,2} = 9439");
        return "prod m_i <= b_{k,2} <= prod (m_i+n_i+1) exactly; spot value confirmed";
    });

    criterion(4, "ratio inequalities L1, L2 (minimal, K <= 6) and L5 (theorem3, k <= 4)", 10, [&] {
        for (int K = 3; K <= 6; ++K) {
            for (int k = 1; k + 2 <= K; ++k) {
                require(verify_claim(Claim::L1, minimal6, k, K).holds, "L1 at k=" + std::to_string(k) + " K=" + std::to_string(K));
                require(verify_claim(Claim::L2, minimal6, k, K).holds, "L2 at k=" + std::to_string(k) + " K=" + std::to_string(K));
            }
        }
        require(verify_claim(Claim::L2, minimal6, 1, 3).lhs == rat("235224/339769"), "L2 LHS spot value at (1,3)");
        for (int k = 1; k <= 4; ++k) {
            const VerificationReport r = verify_claim(Claim::L5, theorem3_6, k, 6);
            require(r.applicable && r.holds, "L5 at k=" + std::to_string(k));
        }
        return "all ratio inequalities hold with zero tolerance; L2 spot value exact";
    });

    criterion(5, "column dominance and orbit mass (minimal and theorem3, K <= 6)", 0, [&] {
        for (const ParamSeq* seq : {&minimal6, &theorem3_6}) {
            for (int K = 2; K <= 6; ++K) {
                for (int k = 0; k + 2 <= K; ++k) {
                    require(verify_claim(Claim::DOM, *seq, k, K).holds, "DOM");
                    require(verify_claim(Claim::MASS, *seq, k, K).holds, "MASS");
                }
            }
        }
        return "b_{k,2} dominates and b_{k,2} lambda2(I_2^(k)) >= 1/3 at every admissible (k, K)";
    });

    criterion(6, "orbit geometry (Lemma 8) at (k=1, K=4) and (k=2, K=4)", 300, [&] {
        const OrbitGeometry g1 = orbit_geometry(minimal4, 4, 1);
        require(g1.images == BigInteger(44) && g1.positions.size() == 44, "44 images at k=1");
        require(g1.disjoint && g1.gaps_ok, "disjoint with gaps >= min other sub-length at k=1");
        const OrbitGeometry g2 = orbit_geometry(minimal4, 4, 2);
        require(g2.images == BigInteger(9439) && g2.positions.size() == 9439, "9439 images at k=2");
        require(g2.disjoint && g2.gaps_ok, "disjoint with gaps >= min other sub-length at k=2");
        return "44 and 9439 pairwise-disjoint images; every gap >= min_{i!=2} lambda3(I_i^(k))";
    });

    criterion(7, "separation statistic (Proposition 1 mechanics) at k <= 2, K = 4", 300, [&] {
        for (int k = 0; k <= 2; ++k) {
            require(separation_check(minimal4, 4, k).holds, "separation at k=" + std::to_string(k));
        }
        return "|T^s x - x| >= min_{i!=2} lambda3(I_i^(k)) for all 1 <= s < b_{k,2}, exact";
    });

    criterion(8, "Theorem-2 chain (corollary1) and theorem4 proof inequality", 30, [&] {
        const auto chain = theorem2_chain(corollary5, 5, Rational(2));
        for (const auto& e : chain) {
            if (e.condition.k >= 2) require(e.condition.holds, "condition holds at k=" + std::to_string(e.condition.k));
            if (e.implication_ok) require(*e.implication_ok, "implication at k=" + std::to_string(e.condition.k));
            if (e.condition.holds && e.cover_le_pow2) {
                require(*e.cover_le_pow2, "t_k(1/2) <= 2^-k at k=" + std::to_string(e.condition.k));
            }
        }
        const int threshold = theorem4_proof_threshold(8);
        require(threshold > 0, "proof inequality evaluated for k = 1..8");
        return "condition holds for k >= 2 and forces t_k(1/2) <= 2^-k; theorem4 proof inequality first holds at k=" +
               std::to_string(threshold) + " (recorded)";
    });

    criterion(9, "ergodicity gap for K = 2..5 with exact spot values at K = 2", 1, [&] {
        for (int K = 2; K <= 5; ++K) {
            const ErgodicityGap e = ergodicity_gap(minimal6, K);
            require(e.freq2_ok, "freq2 >= 1/3 at K=" + std::to_string(K));
            require(e.freq3_ok, "freq3 within the Lemma-1-style bound at K=" + std::to_string(K));
        }
        const ErgodicityGap e2 = ergodicity_gap(minimal6, 2);
        require(e2.freq2 == rat("6534/9439") && e2.freq3 == rat("32/759"), "spot values at K=2");
        return "freq2 >= 1/3 and freq3 <= 2m_1/((n_2+1)(n_1+1)); spot values 6534/9439 and 32/759 exact";
    });

    criterion(10, "bit-identical reports across reruns and thread counts", 0, [&] {
        const std::vector<std::pair<std::string, std::string>> configs = {
            {"verify",
             R"({"sequence":{"kind":"minimal","depth":4},"K":4,"command":"verify","claims":["L1","L2","DOM","MASS"],"levels":[1,2]})"},
            {"induce", R"({"sequence":{"kind":"minimal","depth":4},"K":4,"command":"induce","levels":[1,2]})"},
            {"ergodicity", R"({"sequence":{"kind":"minimal","depth":5},"K":5,"command":"ergodicity"})"},
            {"cover", R"({"sequence":{"kind":"minimal","depth":5},"K":5,"command":"cover","s":"1/2"})"},
            {"conditions", R"({"sequence":{"kind":"corollary1","depth":5},"K":5,"command":"conditions","r":"2"})"},
            {"geometry", R"({"sequence":{"kind":"minimal","depth":4},"K":4,"command":"geometry","level":1})"},
            {"recurrence", R"({"sequence":{"kind":"minimal","depth":4},"K":4,"command":"recurrence","level":1})"},
            {"lengths", R"({"sequence":{"kind":"minimal","depth":4},"K":4,"command":"lengths"})"},
            {"validate", R"({"sequence":{"kind":"minimal","depth":4},"command":"validate"})"},
            {"generate", R"({"sequence":{"kind":"corollary1","depth":4},"command":"generate"})"},
        };
        const fs::path base = fs::temp_directory_path() / "keanelab_acceptance";
        fs::remove_all(base);
        for (const auto& [name, text] : configs) {
            const RunConfig cfg = parse_config(text);
            std::ostringstream sink;
            const fs::path d1 = base / (name + "_run1"), d2 = base / (name + "_run2"), d4 = base / (name + "_threads4");
            run_command(cfg, d1.string(), "both", 1, sink);
            run_command(cfg, d2.string(), "both", 1, sink);
            run_command(cfg, d4.string(), "both", 4, sink);
            for (const char* ext : {".json", ".csv"}) {
                const std::string a = slurp(d1 / (name + ext));
                require(a == slurp(d2 / (name + ext)), name + std::string(ext) + " identical across reruns");
                require(a == slurp(d4 / (name + ext)), name + std::string(ext) + " identical across thread counts");
            }
        }
        return std::to_string(configs.size()) + " commands, json+csv byte-identical across reruns and threads 1 vs 4";
    });

    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: " + std::to_string(failures) + " criterion(s) failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
