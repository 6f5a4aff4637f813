#include "keanelab/config.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

namespace keanelab {

std::string tool_version() { return std::string("keanelab ") + KEANELAB_VERSION; }

namespace {

using nlohmann::json;

// ---- parsing helpers -------------------------------------------------------

bool parse_int_value(const json& v, long long& out) {
    if (v.is_number_integer()) {
        out = v.get<long long>();
        return true;
    }
    if (v.is_string()) {
        try {
            const BigInteger b(v.get<std::string>());
            if (!b.fits_uint64() && b.sign() > 0) return false;
            out = std::stoll(v.get<std::string>());
            return true;
        } catch (...) {
            return false;
        }
    }
    return false;
}

bool parse_rational_value(const json& v, Rational& out) {
    try {
        if (v.is_number_integer()) {
            out = Rational(v.get<long long>());
            return true;
        }
        if (v.is_string()) {
            out = Rational::parse(v.get<std::string>());
            return true;
        }
    } catch (...) {
    }
    return false;
}

struct Parser {
    const json& doc;
    std::vector<std::string>& problems;

    bool has(const char* key) const { return doc.contains(key); }

    std::optional<long long> integer(const char* key) {
        if (!has(key)) return std::nullopt;
        long long v = 0;
        if (!parse_int_value(doc.at(key), v)) {
            problems.push_back(std::string("\"") + key + "\" must be an integer (number or decimal string)");
            return std::nullopt;
        }
        return v;
    }

    std::optional<Rational> rational(const char* key) {
        if (!has(key)) return std::nullopt;
        Rational v;
        if (!parse_rational_value(doc.at(key), v)) {
            problems.push_back(std::string("\"") + key + "\" must be a rational \"p/q\" or integer");
            return std::nullopt;
        }
        return v;
    }
};

const std::map<std::string, std::set<std::string>>& command_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"generate", {"bit_budget"}},
        {"validate", {}},
        {"lengths", {"K"}},
        {"induce", {"K", "level", "levels", "step_budget", "max_subintervals"}},
        {"verify", {"K", "claims", "levels"}},
        {"geometry", {"K", "level", "levels", "step_budget"}},
        {"ergodicity", {"K"}},
        {"cover", {"K", "s", "L", "tolerance"}},
        {"conditions", {"K", "r", "proof_kmax"}},
        {"recurrence", {"K", "level", "x", "beta", "horizon", "step_budget"}},
    };
    return keys;
}

void parse_sequence(const json& doc, RunConfig& cfg, std::vector<std::string>& problems) {
    if (!doc.contains("sequence")) {
        problems.push_back("\"sequence\" is required");
        return;
    }
    const json& s = doc.at("sequence");
    if (!s.is_object()) {
        problems.push_back("\"sequence\" must be an object");
        return;
    }
    for (const auto& item : s.items()) {
        if (item.key() != "kind" && item.key() != "depth" && item.key() != "r" && item.key() != "pairs") {
            problems.push_back("unknown key \"sequence." + item.key() + "\"");
        }
    }
    if (s.contains("pairs")) {
        if (s.contains("kind") || s.contains("depth")) {
            problems.push_back("\"sequence\" takes either pairs or kind+depth, not both");
        }
        if (!s.at("pairs").is_array() || s.at("pairs").empty()) {
            problems.push_back("\"sequence.pairs\" must be a non-empty array of [m, n]");
            return;
        }
        int k = 0;
        for (const json& pr : s.at("pairs")) {
            ++k;
            if (!pr.is_array() || pr.size() != 2) {
                problems.push_back("\"sequence.pairs[" + std::to_string(k - 1) + "]\" must be [m, n]");
                continue;
            }
            auto to_str = [&](const json& v) -> std::optional<std::string> {
                if (v.is_string()) return v.get<std::string>();
                if (v.is_number_integer()) return std::to_string(v.get<long long>());
                return std::nullopt;
            };
            const auto m = to_str(pr[0]), n = to_str(pr[1]);
            if (!m || !n) {
                problems.push_back("pair entries must be integers or decimal strings (k=" + std::to_string(k) + ")");
                continue;
            }
            try {
                if (BigInteger(*m) < BigInteger(1) || BigInteger(*n) < BigInteger(1)) {
                    problems.push_back("pair entries must be >= 1 (k=" + std::to_string(k) + ")");
                }
            } catch (const Error& e) {
                problems.push_back(std::string(e.what()) + " (k=" + std::to_string(k) + ")");
                continue;
            }
            cfg.explicit_pairs.emplace_back(*m, *n);
        }
        cfg.depth = static_cast<int>(cfg.explicit_pairs.size());
        return;
    }
    if (!s.contains("kind") || !s.contains("depth")) {
        problems.push_back("\"sequence\" needs kind+depth or pairs");
        return;
    }
    if (!s.at("kind").is_string()) {
        problems.push_back("\"sequence.kind\" must be a string");
    } else {
        try {
            cfg.kind = sequence_kind_from_string(s.at("kind").get<std::string>());
            if (cfg.kind == SequenceKind::Explicit) {
                problems.push_back("\"sequence.kind\" explicit requires pairs");
            }
        } catch (const Error& e) {
            problems.push_back(e.what());
        }
    }
    long long d = 0;
    if (!parse_int_value(s.at("depth"), d) || d < 1) {
        problems.push_back("\"sequence.depth\" must be an integer >= 1");
    } else {
        cfg.depth = static_cast<int>(d);
    }
    if (s.contains("r")) {
        Rational r;
        if (!parse_rational_value(s.at("r"), r) || r.sign() <= 0) {
            problems.push_back("\"sequence.r\" must be a positive rational");
        } else {
            cfg.sequence_r = r;
        }
    }
}

std::vector<int> parse_levels(const json& doc, std::vector<std::string>& problems) {
    std::vector<int> out;
    if (doc.contains("level")) {
        long long v = 0;
        if (parse_int_value(doc.at("level"), v)) {
            out.push_back(static_cast<int>(v));
        } else {
            problems.push_back("\"level\" must be an integer");
        }
    }
    if (doc.contains("levels")) {
        if (!doc.at("levels").is_array()) {
            problems.push_back("\"levels\" must be an array of integers");
        } else {
            for (const json& v : doc.at("levels")) {
                long long i = 0;
                if (parse_int_value(v, i)) {
                    out.push_back(static_cast<int>(i));
                } else {
                    problems.push_back("\"levels\" entries must be integers");
                }
            }
        }
    }
    return out;
}

// ---- serialization helpers -------------------------------------------------

json rat_json(const Rational& v) { return json{{"exact", v.to_string()}, {"approx", decimal_approx(v)}}; }

json mat_json(const Mat4Z& m) {
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        rows.push_back({m(i, 0).to_string(), m(i, 1).to_string(), m(i, 2).to_string(), m(i, 3).to_string()});
    }
    return rows;
}

json report_json(const VerificationReport& r) {
    json j;
    j["claim"] = r.claim;
    j["sequence"] = r.sequence;
    j["k"] = r.k;
    if (r.K >= 0) j["K"] = r.K;
    j["relation"] = r.relation;
    j["lhs"] = rat_json(r.lhs);
    j["rhs"] = rat_json(r.rhs);
    j["holds"] = r.holds;
    j["applicable"] = r.applicable;
    j["margin"] = rat_json(r.margin);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

const char* report_csv_header() {
    return "claim,k,K,holds,applicable,lhs_exact,lhs_approx,rhs_exact,rhs_approx,margin_exact,margin_approx\n";
}

std::string report_csv_row(const VerificationReport& r) {
    std::string row = r.claim + "," + std::to_string(r.k) + "," + std::to_string(r.K) + ",";
    row += (r.holds ? "true" : "false");
    row += ",";
    row += (r.applicable ? "true" : "false");
    row += "," + r.lhs.to_string() + "," + decimal_approx(r.lhs) + "," + r.rhs.to_string() + "," + decimal_approx(r.rhs);
    row += "," + r.margin.to_string() + "," + decimal_approx(r.margin) + "\n";
    return row;
}

json sequence_json(const ParamSeq& seq) {
    json j;
    j["kind"] = to_string(seq.kind);
    j["depth"] = seq.depth();
    j["pairs"] = json::array();
    for (const auto& p : seq.pairs) j["pairs"].push_back({p.m.to_string(), p.n.to_string()});
    if (seq.theorem3_r) j["r"] = seq.theorem3_r->to_string();
    return j;
}

json validation_json(const ParamSeq& seq, const ValidationReport& rep) {
    json j;
    j["n1"] = seq.depth() > 0 ? seq.pair(1).n.to_string() : "0";
    j["n1_ok"] = rep.n1_ok;
    j["ratios_ok"] = rep.ratios_ok();
    j["fully_valid"] = rep.fully_valid();
    j["checks"] = json::array();
    for (const auto& c : rep.checks) {
        json cj;
        cj["k"] = c.k;
        cj["lower_ok"] = c.lower_ok;          // 3(n_k+1) <= m_k
        cj["lower_binding"] = c.lower_binding;
        if (c.upper_ok) {
            cj["upper_ok"] = *c.upper_ok;     // 2 m_k <= n_{k+1}+1
            cj["upper_binding"] = c.upper_binding;
        }
        j["checks"].push_back(cj);
    }
    return j;
}

void log_check(std::ostream& log, bool ok, const std::string& what) {
    log << (ok ? "[ ok ] " : "[FAIL] ") << what << "\n";
}

struct Outcome {
    json results;
    std::string csv;
    bool all_ok = true;

    void check(std::ostream& log, bool ok, const std::string& what) {
        log_check(log, ok, what);
        all_ok = all_ok && ok;
    }
};

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---- command runners --------------------------------------------------------

Outcome run_generate(const RunConfig&, const ParamSeq& seq, int, std::ostream& log) {
    Outcome oc;
    const ValidationReport rep = validate_sequence(seq);
    oc.results["sequence"] = sequence_json(seq);
    oc.results["validation"] = validation_json(seq, rep);
    if (seq.kind == SequenceKind::Theorem3 && seq.theorem3_r) {
        json rc = json::array();
        for (int k = 1; k < seq.depth(); ++k) {
            rc.push_back(report_json(check_theorem3_condition(seq, *seq.theorem3_r, k).ratio));
        }
        oc.results["theorem3_ratio_checks"] = rc;
    }
    oc.csv = "k,m,n\n";
    for (int k = 1; k <= seq.depth(); ++k) {
        oc.csv += std::to_string(k) + "," + seq.pair(k).m.to_string() + "," + seq.pair(k).n.to_string() + "\n";
    }
    log << "generated " << to_string(seq.kind) << " sequence, depth " << seq.depth() << " (validation reported, not asserted)\n";
    return oc;
}

Outcome run_validate(const RunConfig&, const ParamSeq& seq, int, std::ostream& log) {
    Outcome oc;
    const ValidationReport rep = validate_sequence(seq);
    oc.results["sequence"] = sequence_json(seq);
    oc.results["validation"] = validation_json(seq, rep);
    oc.csv = "k,lower_ok,lower_binding,upper_ok,upper_binding\n";
    for (const auto& c : rep.checks) {
        oc.csv += std::to_string(c.k) + "," + (c.lower_ok ? "true" : "false") + "," + (c.lower_binding ? "true" : "false");
        oc.csv += c.upper_ok ? (std::string(",") + (*c.upper_ok ? "true" : "false") + "," + (c.upper_binding ? "true" : "false"))
                             : std::string(",,");
        oc.csv += "\n";
    }
    oc.check(log, rep.n1_ok, "n_1 >= 10 (n_1 = " + (seq.depth() ? seq.pair(1).n.to_string() : "none") + ")");
    for (const auto& c : rep.checks) {
        oc.check(log, c.lower_ok, "3(n_k+1) <= m_k at k=" + std::to_string(c.k) + (c.lower_binding ? " (binding)" : ""));
        if (c.upper_ok) {
            oc.check(log, *c.upper_ok,
                     "m_k <= (n_{k+1}+1)/2 at k=" + std::to_string(c.k) + (c.upper_binding ? " (binding)" : ""));
        }
    }
    return oc;
}

Outcome run_lengths(const RunConfig& cfg, const ParamSeq& seq, int, std::ostream& log) {
    Outcome oc;
    const Vec4Q lens = length_vector(seq, cfg.K);
    oc.results["K"] = cfg.K;
    json ex = json::array(), ap = json::array();
    oc.csv = "i,length_exact,length_approx\n";
    for (int i = 0; i < 4; ++i) {
        ex.push_back(lens[i].to_string());
        ap.push_back(decimal_approx(lens[i]));
        oc.csv += std::to_string(i + 1) + "," + lens[i].to_string() + "," + decimal_approx(lens[i]) + "\n";
    }
    oc.results["lengths"] = ex;
    oc.results["lengths_approx"] = ap;
    oc.results["permutation"] = keane_permutation().to_string();
    log << "depth-" << cfg.K << " truncated lengths emitted\n";
    return oc;
}

Outcome run_induce(const RunConfig& cfg, const ParamSeq& seq, int, std::ostream& log) {
    Outcome oc;
    oc.results["levels"] = json::array();
    oc.csv = "k,K,holds,spatial_perm,renamed_perm,mismatches\n";
    const InduceOptions opts{cfg.step_budget, cfg.max_subintervals};
    const int kmax = *std::max_element(cfg.levels.begin(), cfg.levels.end());
    const std::vector<LandingLevel> chain = landing_chain(seq, cfg.K, kmax, opts);
    for (int k : cfg.levels) {
        const LandingLevel& lv = chain[static_cast<std::size_t>(k - 1)];
        const Mat4Z expected = keane_matrix(seq.pair(k).m, seq.pair(k).n);
        json lj;
        lj["k"] = k;
        lj["K"] = cfg.K;
        lj["expected"] = mat_json(expected);
        lj["actual"] = mat_json(lv.visit_matrix);
        lj["spatial_permutation"] = lv.spatial_perm.to_string();
        lj["renamed_permutation"] = lv.renamed_perm.to_string();
        json mm = json::array();
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (lv.visit_matrix(i, j) == expected(i, j)) continue;
                mm.push_back("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): got " +
                             lv.visit_matrix(i, j).to_string() + ", expected " + expected(i, j).to_string());
            }
        }
        const bool holds = mm.empty();
        lj["holds"] = holds;
        lj["mismatches"] = mm;
        oc.results["levels"].push_back(lj);
        oc.csv += std::to_string(k) + "," + std::to_string(cfg.K) + "," + (holds ? "true" : "false") + "," +
                  lv.spatial_perm.to_string() + "," + lv.renamed_perm.to_string() + "," + std::to_string(mm.size()) + "\n";
        oc.check(log, holds, "landing pattern at k=" + std::to_string(k) + " equals A_{" + seq.pair(k).m.to_string() +
                                 "," + seq.pair(k).n.to_string() + "}");
    }
    return oc;
}

std::vector<int> default_levels_for(Claim c, int K) {
    std::vector<int> ks;
    for (int k = (c == Claim::L1) ? 1 : 0; k <= K - 2; ++k) ks.push_back(k);
    return ks;
}

Outcome run_verify(const RunConfig& cfg, const ParamSeq& seq, int threads, std::ostream& log) {
    Outcome oc;
    struct Task {
        Claim claim;
        int k;
        int K;
    };
    std::vector<Task> tasks;
    for (const std::string& cs : cfg.claims) {
        const Claim c = claim_from_string(cs);
        const std::vector<int> ks = cfg.levels.empty() ? default_levels_for(c, cfg.K) : cfg.levels;
        for (int k : ks) {
            tasks.push_back({c, k, cfg.K});
            // re-verify at K+1 when the sequence is deep enough (stability);
            // DOM does not depend on the truncation depth
            if (c != Claim::DOM && cfg.K + 1 <= seq.depth()) tasks.push_back({c, k, cfg.K + 1});
        }
    }
    std::vector<VerificationReport> reports(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), threads, [&](int i) {
        const Task& t = tasks[static_cast<std::size_t>(i)];
        reports[static_cast<std::size_t>(i)] = verify_claim(t.claim, seq, t.k, t.K);
    });

    oc.results["reports"] = json::array();
    oc.csv = report_csv_header();
    for (const auto& r : reports) {
        oc.results["reports"].push_back(report_json(r));
        oc.csv += report_csv_row(r);
        if (!r.applicable) {
            log << "[ -- ] " << r.claim << " k=" << r.k << " K=" << r.K << ": not applicable\n";
            continue;
        }
        oc.check(log, r.holds,
                 r.claim + " k=" + std::to_string(r.k) + " K=" + std::to_string(r.K) + ": " + r.lhs.to_string() + " " +
                     (r.relation == "lhs <= rhs" ? "<=" : r.relation == "lhs > rhs" ? ">" : ">=") + " " + r.rhs.to_string());
    }
    return oc;
}

Outcome run_geometry(const RunConfig& cfg, const ParamSeq& seq, int, std::ostream& log) {
    Outcome oc;
    oc.results["levels"] = json::array();
    oc.csv = "k,index,position_exact,gap_to_next_exact\n";
    for (int k : cfg.levels) {
        const OrbitGeometry g = orbit_geometry(seq, cfg.K, k, cfg.step_budget);
        json gj;
        gj["k"] = g.k;
        gj["K"] = g.K;
        gj["images"] = g.images.to_string();
        gj["segment"] = {g.seg_lo.to_string(), g.seg_hi.to_string()};
        gj["min_other_length"] = rat_json(g.min_other_length);
        gj["min_gap"] = rat_json(g.min_gap);
        gj["disjoint"] = g.disjoint;
        gj["gaps_ok"] = g.gaps_ok;
        gj["returned"] = g.returned;
        oc.results["levels"].push_back(gj);
        const Rational seg_len = g.seg_hi - g.seg_lo;
        for (std::size_t i = 0; i < g.positions.size(); ++i) {
            const Rational pos(g.positions[i], g.den);
            std::string gap;
            if (i + 1 < g.positions.size()) {
                gap = (Rational(g.positions[i + 1], g.den) - pos - seg_len).to_string();
            }
            oc.csv += std::to_string(k) + "," + std::to_string(i) + "," + pos.to_string() + "," + gap + "\n";
        }
        oc.check(log, g.disjoint, "images of I_2^(" + std::to_string(k) + ") pairwise disjoint (" + g.images.to_string() + " images)");
        oc.check(log, g.gaps_ok, "every gap >= min_{i!=2} lambda3(I_i^(" + std::to_string(k) + ")) = " + g.min_other_length.to_string());
    }
    return oc;
}

Outcome run_ergodicity(const RunConfig& cfg, const ParamSeq& seq, int threads, std::ostream& log) {
    Outcome oc;
    std::vector<ErgodicityGap> rows(static_cast<std::size_t>(cfg.K));
    parallel_for(cfg.K, threads, [&](int i) { rows[static_cast<std::size_t>(i)] = ergodicity_gap(seq, i + 1); });
    oc.results["series"] = json::array();
    oc.csv = "K,freq2_exact,freq2_approx,freq3_exact,freq3_approx,gap_exact,freq3_bound_exact,freq2_ok,freq3_ok\n";
    for (const auto& e : rows) {
        json ej;
        ej["K"] = e.K;
        ej["freq2"] = rat_json(e.freq2);
        ej["freq3"] = rat_json(e.freq3);
        ej["gap"] = rat_json(e.gap);
        ej["freq3_bound"] = rat_json(e.freq3_bound);
        ej["freq2_ok"] = e.freq2_ok;
        ej["freq3_ok"] = e.freq3_ok;
        oc.results["series"].push_back(ej);
        oc.csv += std::to_string(e.K) + "," + e.freq2.to_string() + "," + decimal_approx(e.freq2) + "," +
                  e.freq3.to_string() + "," + decimal_approx(e.freq3) + "," + e.gap.to_string() + "," +
                  e.freq3_bound.to_string() + "," + (e.freq2_ok ? "true" : "false") + "," + (e.freq3_ok ? "true" : "false") + "\n";
        if (e.K >= 2) {
            oc.check(log, e.freq2_ok, "freq2 >= 1/3 at K=" + std::to_string(e.K) + " (" + e.freq2.to_string() + ")");
            oc.check(log, e.freq3_ok,
                     "freq3 <= 2m_1/((n_2+1)(n_1+1)) at K=" + std::to_string(e.K) + " (" + e.freq3.to_string() + ")");
        }
    }
    return oc;
}

Outcome run_cover(const RunConfig& cfg, const ParamSeq& seq, int, std::ostream& log) {
    Outcome oc;
    const CoverSumSeries series = cover_terms(seq, cfg.K, *cfg.s, cfg.L);
    json sj;
    sj["s"] = cfg.s->to_string();
    sj["L"] = series.L;
    sj["K"] = series.K;
    sj["decay_flag"] = series.decay_flag;
    sj["terms"] = json::array();
    oc.csv = "k,b_k2,lambda3_I2k,term_exact,term_decimal\n";
    const bool assert_le_one = *cfg.s == Rational(1);
    for (const auto& t : series.terms) {
        json tj;
        tj["k"] = t.k;
        tj["b_k2"] = t.b_k2.to_string();
        tj["lambda3_I2k"] = rat_json(t.lambda3_I2k);
        tj["term_pow_exact"] = t.term_pow.to_string();
        tj["term_approx"] = t.term_approx;
        tj["le_one"] = t.le_one;
        tj["le_pow2"] = t.le_pow2;
        sj["terms"].push_back(tj);
        oc.csv += std::to_string(t.k) + "," + t.b_k2.to_string() + "," + t.lambda3_I2k.to_string() + "," +
                  t.term_pow.to_string() + "," + t.term_approx + "\n";
        if (assert_le_one) {
            oc.check(log, t.le_one, "t_" + std::to_string(t.k) + "(1) <= 1 (" + t.term_approx + ")");
        } else {
            log << "[info] t_" + std::to_string(t.k) + "(" + cfg.s->to_string() + ") ~ " + t.term_approx + "\n";
        }
    }
    sj["partial_sums_approx"] = series.partial_sum_approx;
    oc.results["cover"] = sj;
    log << "decay flag (terms halve level to level): " << (series.decay_flag ? "true" : "false") << "\n";
    if (cfg.tolerance) {
        const CriticalExponent ce = critical_exponent(seq, cfg.K, *cfg.tolerance);
        json cj;
        cj["lo"] = ce.lo.to_string();
        cj["hi"] = ce.hi.to_string();
        cj["flag"] = ce.flag;
        cj["evaluations"] = ce.evaluations;
        oc.results["critical_exponent"] = cj;
        log << "critical exponent bracket [" << ce.lo.to_string() << ", " << ce.hi.to_string() << "] (" << ce.flag
            << ", " << ce.evaluations << " evaluations)\n";
    }
    return oc;
}

Outcome run_conditions(const RunConfig& cfg, const ParamSeq& seq, int, std::ostream& log) {
    Outcome oc;
    oc.csv = "check,k,holds,lhs,rhs\n";
    const std::vector<Theorem2ChainEntry> chain = theorem2_chain(seq, cfg.K, *cfg.r);
    oc.results["theorem2"] = json::array();
    for (const auto& e : chain) {
        json ej;
        ej["condition"] = report_json(e.condition);
        if (e.cover_le_pow2) ej["cover_le_pow2"] = *e.cover_le_pow2;
        if (e.implication_ok) ej["implication_ok"] = *e.implication_ok;
        oc.results["theorem2"].push_back(ej);
        oc.csv += "TH2," + std::to_string(e.condition.k) + "," + (e.condition.holds ? "true" : "false") + "," +
                  e.condition.lhs.to_string() + "," + e.condition.rhs.to_string() + "\n";
        log << "[info] TH2 condition at k=" << e.condition.k << ": " << (e.condition.holds ? "holds" : "fails") << "\n";
        if (e.implication_ok) {
            oc.check(log, *e.implication_ok,
                     "condition => t_k(1/r) <= 2^-k at k=" + std::to_string(e.condition.k) +
                         (e.condition.holds ? "" : " (vacuous)"));
        }
    }
    oc.results["theorem3"] = json::array();
    for (int k = 1; k < seq.depth(); ++k) {
        const Theorem3Condition c = check_theorem3_condition(seq, *cfg.r, k);
        json cj;
        cj["ratio"] = report_json(c.ratio);
        cj["growth"] = report_json(c.growth);
        oc.results["theorem3"].push_back(cj);
        oc.csv += "TH3R," + std::to_string(k) + "," + (c.ratio.holds ? "true" : "false") + "," + c.ratio.lhs.to_string() +
                  "," + c.ratio.rhs.to_string() + "\n";
        oc.csv += "TH3G," + std::to_string(k) + "," + (c.growth.holds ? "true" : "false") + "," +
                  c.growth.lhs.to_string() + "," + c.growth.rhs.to_string() + "\n";
        log << "[info] TH3 at k=" << k << ": ratio " << (c.ratio.holds ? "holds" : "fails") << ", growth "
            << (c.growth.holds ? "holds" : "fails") << "\n";
    }
    if (seq.kind == SequenceKind::Theorem4) {
        const auto proof = theorem4_proof_inequality(cfg.proof_kmax);
        json pj = json::array();
        for (const auto& p : proof) {
            pj.push_back(json{{"k", p.k}, {"holds", p.holds}});
            oc.csv += "TH4P," + std::to_string(p.k) + "," + (p.holds ? "true" : "false") + ",,\n";
        }
        const int threshold = theorem4_proof_threshold(cfg.proof_kmax);
        oc.results["theorem4_proof"] = json{{"checks", pj}, {"threshold", threshold}};
        log << "[info] theorem-4 proof inequality first holds at k=" << threshold << " (recorded)\n";
    }
    return oc;
}

Outcome run_recurrence(const RunConfig& cfg, const ParamSeq& seq, int, std::ostream& log) {
    Outcome oc;
    const IetMap t = build_keane_iet(seq, cfg.K);
    Rational x0;
    std::uint64_t horizon = cfg.horizon;
    std::optional<VerificationReport> sep;
    Rational bound;
    if (!cfg.levels.empty()) {
        const int k = cfg.levels.front();
        sep = separation_check(seq, cfg.K, k, cfg.step_budget);
        const BigInteger b2 = column_mass(seq, k, 2);
        if (!cfg.has_horizon) {
            horizon = b2 > BigInteger(1) ? b2.to_uint64() - 1 : 1;
        }
        if (k == 0) {
            x0 = (t.breaks()[1] + t.breaks()[2]) / Rational(2);
        } else {
            const std::vector<LandingLevel> chain = landing_chain(seq, cfg.K, k, InduceOptions{cfg.step_budget, 16});
            x0 = (chain.back().cell_lo[1] + chain.back().cell_hi[1]) / Rational(2);
        }
        bound = sep->rhs;
        oc.results["separation"] = report_json(*sep);
        oc.check(log, sep->holds, "separation |T^s x - x| >= min_{i!=2} lambda3(I_i^(" + std::to_string(k) +
                                      ")) for 1 <= s < b_{k,2}" + (k == 0 ? " (vacuous)" : ""));
    } else {
        x0 = *cfg.x;
    }
    const RecurrenceSeries series = recurrence_statistic(t, x0, horizon, cfg.beta);
    json rj;
    rj["x0"] = x0.to_string();
    rj["horizon"] = horizon;
    rj["beta"] = cfg.beta.to_string();
    rj["records"] = json::array();
    oc.csv = "n,distance_exact,stat_pow_exact,stat_approx\n";
    for (const auto& smp : series.records) {
        rj["records"].push_back(json{{"n", smp.n},
                                     {"distance", rat_json(smp.distance)},
                                     {"stat_pow_exact", smp.stat_pow.to_string()},
                                     {"stat_approx", smp.stat_approx}});
        oc.csv += std::to_string(smp.n) + "," + smp.distance.to_string() + "," + smp.stat_pow.to_string() + "," +
                  smp.stat_approx + "\n";
    }
    rj["minimum"] = json{{"n", series.minimum.n},
                         {"distance", rat_json(series.minimum.distance)},
                         {"stat_pow_exact", series.minimum.stat_pow.to_string()},
                         {"stat_approx", series.minimum.stat_approx}};
    rj["breakpoint_hits"] = series.breakpoint_hits;
    if (series.breakpoint_hits > 0) rj["first_breakpoint_hit"] = series.first_breakpoint_hit;
    oc.results["recurrence"] = rj;
    log << "recurrence minimum at n=" << series.minimum.n << ": " << series.minimum.stat_approx << "\n";
    if (sep && !cfg.levels.empty() && cfg.beta.is_zero() && !cfg.has_horizon && cfg.levels.front() > 0) {
        // cross-check: the beta=0 statistic over one return cycle equals the
        // separation minimum, so it must clear the same bound
        oc.check(log, series.minimum.distance >= bound,
                 "recurrence minimum >= min_{i!=2} lambda3(I_i^(k)) cross-check");
    }
    return oc;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    std::vector<std::string> problems;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError({std::string("malformed JSON: ") + e.what()});
    }
    if (!doc.is_object()) throw ConfigError({"config must be a JSON object"});

    RunConfig cfg;
    if (!doc.contains("command") || !doc.at("command").is_string()) {
        problems.push_back("\"command\" is required");
    } else {
        cfg.command = doc.at("command").get<std::string>();
        if (!command_keys().count(cfg.command)) problems.push_back("unknown command \"" + cfg.command + "\"");
    }

    // reject unknown keys for the named command
    if (command_keys().count(cfg.command)) {
        const std::set<std::string>& allowed = command_keys().at(cfg.command);
        for (const auto& item : doc.items()) {
            if (item.key() == "command" || item.key() == "sequence") continue;
            if (!allowed.count(item.key())) {
                problems.push_back("unknown key \"" + item.key() + "\" for command \"" + cfg.command + "\"");
            }
        }
    }

    parse_sequence(doc, cfg, problems);

    Parser p{doc, problems};
    if (const auto v = p.integer("K")) {
        cfg.K = static_cast<int>(*v);
        cfg.has_K = true;
    }
    cfg.levels = parse_levels(doc, problems);
    if (doc.contains("claims")) {
        if (!doc.at("claims").is_array() || doc.at("claims").empty()) {
            problems.push_back("\"claims\" must be a non-empty array");
        } else {
            for (const json& c : doc.at("claims")) {
                if (!c.is_string()) {
                    problems.push_back("\"claims\" entries must be strings");
                    continue;
                }
                try {
                    claim_from_string(c.get<std::string>());
                    cfg.claims.push_back(c.get<std::string>());
                } catch (const Error& e) {
                    problems.push_back(e.what());
                }
            }
        }
    }
    if (const auto v = p.rational("s")) cfg.s = *v;
    if (const auto v = p.integer("L")) cfg.L = static_cast<int>(*v);
    if (const auto v = p.rational("r")) cfg.r = *v;
    if (const auto v = p.rational("tolerance")) cfg.tolerance = *v;
    if (const auto v = p.rational("beta")) cfg.beta = *v;
    if (const auto v = p.rational("x")) cfg.x = *v;
    if (const auto v = p.integer("horizon")) {
        if (*v < 1) {
            problems.push_back("\"horizon\" must be >= 1");
        } else {
            cfg.horizon = static_cast<std::uint64_t>(*v);
            cfg.has_horizon = true;
        }
    }
    if (const auto v = p.integer("step_budget")) {
        if (*v < 1) problems.push_back("\"step_budget\" must be >= 1");
        else cfg.step_budget = static_cast<std::uint64_t>(*v);
    }
    if (const auto v = p.integer("max_subintervals")) {
        if (*v < 4) problems.push_back("\"max_subintervals\" must be >= 4");
        else cfg.max_subintervals = static_cast<int>(*v);
    }
    if (const auto v = p.integer("bit_budget")) {
        if (*v < 64) problems.push_back("\"bit_budget\" must be >= 64");
        else cfg.bit_budget = static_cast<std::uint64_t>(*v);
    }
    if (const auto v = p.integer("proof_kmax")) {
        if (*v < 1 || *v > 12) problems.push_back("\"proof_kmax\" must be in 1..12");
        else cfg.proof_kmax = static_cast<int>(*v);
    }

    // command-specific requirements
    const std::string& c = cfg.command;
    const bool needs_K = c == "lengths" || c == "induce" || c == "verify" || c == "geometry" || c == "ergodicity" ||
                         c == "cover" || c == "recurrence" || c == "conditions";
    if (needs_K && !cfg.has_K) problems.push_back("\"K\" is required for command \"" + c + "\"");
    if (cfg.has_K && cfg.depth > 0 && needs_K) {
        if (cfg.K < 1) problems.push_back("\"K\" must be >= 1");
        if (cfg.K > cfg.depth) problems.push_back("\"K\" exceeds the sequence depth " + std::to_string(cfg.depth));
    }
    if (c == "lengths" && cfg.has_K && cfg.K < 2) problems.push_back("lengths requires K >= 2");
    if (c == "generate" && cfg.explicit_pairs.size() > 0) problems.push_back("generate requires a named sequence kind");
    if (c == "induce" || c == "geometry") {
        if (cfg.levels.empty()) problems.push_back("\"level\" or \"levels\" is required for command \"" + c + "\"");
        const int kmin = c == "induce" ? 1 : 0;
        for (int k : cfg.levels) {
            if (k < kmin) problems.push_back("level must be >= " + std::to_string(kmin));
            else if (cfg.has_K && k + 2 > cfg.K) {
                problems.push_back("level " + std::to_string(k) + " requires K >= level+2 (K=" + std::to_string(cfg.K) + ")");
            }
        }
    }
    if (c == "verify") {
        if (cfg.claims.empty()) problems.push_back("\"claims\" is required for command \"verify\"");
        for (int k : cfg.levels) {
            if (k < 0 || (cfg.has_K && k + 2 > cfg.K)) {
                problems.push_back("level " + std::to_string(k) + " requires K >= level+2 (K=" + std::to_string(cfg.K) + ")");
            }
            if (k == 0 && std::find(cfg.claims.begin(), cfg.claims.end(), "L1") != cfg.claims.end()) {
                problems.push_back("claim L1 needs level >= 1");
            }
        }
    }
    if (c == "cover") {
        if (!cfg.s) problems.push_back("\"s\" is required for command \"cover\"");
        else if (cfg.s->sign() <= 0 || *cfg.s > Rational(1)) problems.push_back("\"s\" must satisfy 0 < s <= 1 (t_k(0) = b_{k,2} diverges)");
        if (cfg.has_K && (cfg.L < 1 || cfg.L > cfg.K - 2)) problems.push_back("\"L\" must satisfy 1 <= L <= K-2");
        if (cfg.tolerance) {
            if (cfg.tolerance->sign() <= 0) problems.push_back("\"tolerance\" must be positive");
            if (cfg.has_K && cfg.K < 4) problems.push_back("critical exponent estimation requires K >= 4");
        }
    }
    if (c == "conditions") {
        if (!cfg.r) problems.push_back("\"r\" is required for command \"conditions\"");
        else if (cfg.r->sign() <= 0) problems.push_back("\"r\" must be positive");
        if (cfg.depth < 2) problems.push_back("conditions need a sequence of depth >= 2");
    }
    if (c == "recurrence") {
        if (cfg.levels.empty() == !cfg.x) {
            problems.push_back("recurrence takes exactly one of \"level\" or \"x\"");
        }
        for (int k : cfg.levels) {
            if (k < 0 || (cfg.has_K && k + 2 > cfg.K)) {
                problems.push_back("level " + std::to_string(k) + " requires K >= level+2 (K=" + std::to_string(cfg.K) + ")");
            }
        }
        if (cfg.x) {
            if (cfg.x->sign() < 0 || *cfg.x >= Rational(1)) problems.push_back("\"x\" must lie in [0,1)");
            if (!cfg.has_horizon) problems.push_back("\"horizon\" is required with an explicit \"x\"");
        }
        if (cfg.beta.sign() < 0) problems.push_back("\"beta\" must be >= 0");
    }

    if (!problems.empty()) throw ConfigError(problems);
    cfg.echo = doc;
    return cfg;
}

ParamSeq materialize_sequence(const RunConfig& cfg) {
    if (!cfg.explicit_pairs.empty()) {
        ParamSeq seq;
        seq.kind = SequenceKind::Explicit;
        for (const auto& [m, n] : cfg.explicit_pairs) seq.pairs.push_back({BigInteger(m), BigInteger(n)});
        return seq;
    }
    return generate(*cfg.kind, cfg.depth, cfg.sequence_r, GenerateOptions{cfg.bit_budget});
}

int run_command(const RunConfig& cfg, const std::string& out_dir, const std::string& format, int threads,
                std::ostream& log) {
    const ParamSeq seq = materialize_sequence(cfg);

    Outcome oc;
    if (cfg.command == "generate") oc = run_generate(cfg, seq, threads, log);
    else if (cfg.command == "validate") oc = run_validate(cfg, seq, threads, log);
    else if (cfg.command == "lengths") oc = run_lengths(cfg, seq, threads, log);
    else if (cfg.command == "induce") oc = run_induce(cfg, seq, threads, log);
    else if (cfg.command == "verify") oc = run_verify(cfg, seq, threads, log);
    else if (cfg.command == "geometry") oc = run_geometry(cfg, seq, threads, log);
    else if (cfg.command == "ergodicity") oc = run_ergodicity(cfg, seq, threads, log);
    else if (cfg.command == "cover") oc = run_cover(cfg, seq, threads, log);
    else if (cfg.command == "conditions") oc = run_conditions(cfg, seq, threads, log);
    else if (cfg.command == "recurrence") oc = run_recurrence(cfg, seq, threads, log);
    else throw ConfigError({"unknown command \"" + cfg.command + "\""});

    json envelope;
    envelope["command"] = cfg.command;
    envelope["config"] = cfg.echo;
    envelope["results"] = oc.results;
    envelope["version"] = tool_version();

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path base = std::filesystem::path(out_dir) / cfg.command;
    if (format == "json" || format == "both") {
        std::ofstream f(base.string() + ".json", std::ios::binary);
        f << envelope.dump(2) << "\n";
    }
    if (format == "csv" || format == "both") {
        std::ofstream f(base.string() + ".csv", std::ios::binary);
        f << oc.csv;
    }

    const int code = oc.all_ok ? 0 : 2;
    log << "exit " << code << "\n";
    return code;
}

}  // namespace keanelab
