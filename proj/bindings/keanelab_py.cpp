#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include <json.hpp>

#include "keanelab/config.hpp"

namespace py = pybind11;
using namespace keanelab;

namespace {

BigInteger to_big(const py::handle& obj) {
    if (py::isinstance<py::int_>(obj)) return BigInteger(py::str(obj).cast<std::string>());
    if (py::isinstance<py::str>(obj)) return BigInteger(obj.cast<std::string>());
    throw DomainError("expected an int or decimal string");
}

py::int_ from_big(const BigInteger& v) {
    PyObject* p = PyLong_FromString(v.to_string().c_str(), nullptr, 10);
    if (!p) throw py::error_already_set();
    return py::reinterpret_steal<py::int_>(p);
}

Rational to_rat(const py::handle& obj) {
    if (py::isinstance<py::int_>(obj)) return Rational(to_big(obj));
    if (py::isinstance<py::str>(obj)) return Rational::parse(obj.cast<std::string>());
    throw DomainError("expected an int or \"p/q\" string");
}

ParamSeq to_seq(const py::sequence& pairs) {
    ParamSeq seq;
    seq.kind = SequenceKind::Explicit;
    for (const py::handle& item : pairs) {
        const py::sequence pr = py::reinterpret_borrow<py::sequence>(item);
        if (py::len(pr) != 2) throw DomainError("pairs must be (m, n) tuples");
        seq.pairs.push_back({to_big(pr[0]), to_big(pr[1])});
    }
    return seq;
}

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            py::dict d;
            for (const auto& item : j.items()) d[py::str(item.key())] = json_to_py(item.value());
            return d;
        }
        case nlohmann::json::value_t::array: {
            py::list l;
            for (const auto& v : j) l.append(json_to_py(v));
            return l;
        }
        case nlohmann::json::value_t::string:
            return py::str(j.get<std::string>());
        case nlohmann::json::value_t::boolean:
            return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer:
            return py::int_(j.get<long long>());
        case nlohmann::json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case nlohmann::json::value_t::number_float:
            return py::float_(j.get<double>());
        default:
            return py::none();
    }
}

py::list mat_to_py(const Mat4Z& m) {
    py::list rows;
    for (int i = 0; i < 4; ++i) {
        py::list row;
        for (int j = 0; j < 4; ++j) row.append(from_big(m(i, j)));
        rows.append(row);
    }
    return rows;
}

py::list vecq_to_py(const Vec4Q& v) {
    py::list out;
    for (int i = 0; i < 4; ++i) out.append(py::str(v[i].to_string()));
    return out;
}

Permutation4 to_perm(const std::vector<int>& images) {
    if (images.size() != 4) throw DomainError("permutation needs 4 images");
    return Permutation4(std::array<int, 4>{images[0], images[1], images[2], images[3]});
}

IetMap to_iet(const std::vector<std::string>& lengths, const std::vector<int>& perm) {
    if (lengths.size() != 4) throw DomainError("need 4 lengths");
    Vec4Q v;
    for (int i = 0; i < 4; ++i) v[i] = Rational::parse(lengths[static_cast<std::size_t>(i)]);
    return IetMap::build(v, to_perm(perm));
}

nlohmann::json report_to_json(const VerificationReport& r) {
    nlohmann::json j;
    j["claim"] = r.claim;
    j["sequence"] = r.sequence;
    j["k"] = r.k;
    j["K"] = r.K;
    j["relation"] = r.relation;
    j["lhs"] = r.lhs.to_string();
    j["rhs"] = r.rhs.to_string();
    j["lhs_approx"] = decimal_approx(r.lhs);
    j["rhs_approx"] = decimal_approx(r.rhs);
    j["holds"] = r.holds;
    j["applicable"] = r.applicable;
    j["margin"] = r.margin.to_string();
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace

PYBIND11_MODULE(_keanelab, m) {
    m.doc() = "exact-arithmetic laboratory for Keane-family 4-interval exchange transformations";
    m.attr("__version__") = KEANELAB_VERSION;

    // translators are tried most-recently-registered first: base before derived
    py::register_exception<Error>(m, "KeanelabError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("keane_permutation", [] { return keane_permutation().images(); },
          "one-line permutation used by the whole family");

    m.def(
        "generate",
        [](const std::string& kind, int depth, const py::object& r) {
            std::optional<Rational> rr;
            if (!r.is_none()) rr = to_rat(r);
            const ParamSeq seq = generate(sequence_kind_from_string(kind), depth, rr);
            py::list pairs;
            for (const auto& p : seq.pairs) pairs.append(py::make_tuple(from_big(p.m), from_big(p.n)));
            return pairs;
        },
        py::arg("kind"), py::arg("depth"), py::arg("r") = py::none());

    m.def("validate", [](const py::sequence& pairs) {
        const ParamSeq seq = to_seq(pairs);
        const ValidationReport rep = validate_sequence(seq);
        py::dict d;
        d["n1_ok"] = rep.n1_ok;
        d["ratios_ok"] = rep.ratios_ok();
        d["fully_valid"] = rep.fully_valid();
        py::list checks;
        for (const auto& c : rep.checks) {
            py::dict cd;
            cd["k"] = c.k;
            cd["lower_ok"] = c.lower_ok;
            cd["lower_binding"] = c.lower_binding;
            if (c.upper_ok) {
                cd["upper_ok"] = *c.upper_ok;
                cd["upper_binding"] = c.upper_binding;
            }
            checks.append(cd);
        }
        d["checks"] = checks;
        return d;
    });

    m.def("keane_matrix", [](const py::object& mm, const py::object& nn) { return mat_to_py(keane_matrix(to_big(mm), to_big(nn))); });
    m.def("product_matrix", [](const py::sequence& pairs, int k) { return mat_to_py(product_matrix(to_seq(pairs), k)); });
    m.def("column_mass", [](const py::sequence& pairs, int k, int i) { return from_big(column_mass(to_seq(pairs), k, i)); });
    m.def("mass_bounds", [](const py::sequence& pairs, int k) {
        const auto [lo, hi] = mass_bounds(to_seq(pairs), k);
        return py::make_tuple(from_big(lo), from_big(hi));
    });
    m.def("length_vector", [](const py::sequence& pairs, int K) { return vecq_to_py(length_vector(to_seq(pairs), K)); });
    m.def("level_weights", [](const py::sequence& pairs, int k, int K, int basis) {
        return vecq_to_py(level_weights(to_seq(pairs), k, K, basis));
    });

    m.def("iet_apply", [](const std::vector<std::string>& lengths, const std::vector<int>& perm, const std::string& x) {
        return to_iet(lengths, perm).apply(Rational::parse(x)).to_string();
    });
    m.def("iet_apply_inverse",
          [](const std::vector<std::string>& lengths, const std::vector<int>& perm, const std::string& y) {
              return to_iet(lengths, perm).apply_inverse(Rational::parse(y)).to_string();
          });
    m.def("itinerary", [](const std::vector<std::string>& lengths, const std::vector<int>& perm, const std::string& x,
                          std::uint64_t n) {
        py::list out;
        for (const auto& [j, pt] : to_iet(lengths, perm).itinerary(Rational::parse(x), n)) {
            out.append(py::make_tuple(j, pt.to_string()));
        }
        return out;
    });
    m.def("induce", [](const std::vector<std::string>& lengths, const std::vector<int>& perm, const std::string& a,
                       const std::string& b) {
        const InducedMap ind = induce(to_iet(lengths, perm), Rational::parse(a), Rational::parse(b));
        return json_to_py(nlohmann::json::parse(ind.to_json_string()));
    });

    m.def("verify_landing_pattern", [](const py::sequence& pairs, int K, int k) {
        const LandingReport rep = verify_landing_pattern(to_seq(pairs), K, k);
        py::dict d;
        d["k"] = rep.k;
        d["K"] = rep.K;
        d["holds"] = rep.holds;
        d["expected"] = mat_to_py(rep.expected);
        d["actual"] = mat_to_py(rep.actual);
        d["spatial_permutation"] = rep.spatial_perm.to_string();
        d["renamed_permutation"] = rep.renamed_perm.to_string();
        d["mismatches"] = rep.mismatches;
        return d;
    });

    m.def("verify_claim", [](const std::string& claim, const py::sequence& pairs, int k, int K) {
        return json_to_py(report_to_json(verify_claim(claim_from_string(claim), to_seq(pairs), k, K)));
    });

    m.def(
        "orbit_geometry",
        [](const py::sequence& pairs, int K, int k, std::uint64_t budget) {
            const OrbitGeometry g = orbit_geometry(to_seq(pairs), K, k, budget);
            py::dict d;
            d["k"] = g.k;
            d["K"] = g.K;
            d["images"] = from_big(g.images);
            d["segment"] = py::make_tuple(g.seg_lo.to_string(), g.seg_hi.to_string());
            d["min_other_length"] = g.min_other_length.to_string();
            d["min_gap"] = g.min_gap.to_string();
            d["disjoint"] = g.disjoint;
            d["gaps_ok"] = g.gaps_ok;
            d["returned"] = g.returned;
            return d;
        },
        py::arg("pairs"), py::arg("K"), py::arg("k"), py::arg("budget") = 50'000'000ULL);

    m.def("ergodicity_gap", [](const py::sequence& pairs, int K) {
        const ErgodicityGap e = ergodicity_gap(to_seq(pairs), K);
        py::dict d;
        d["K"] = e.K;
        d["freq2"] = e.freq2.to_string();
        d["freq3"] = e.freq3.to_string();
        d["gap"] = e.gap.to_string();
        d["freq3_bound"] = e.freq3_bound.to_string();
        d["freq2_ok"] = e.freq2_ok;
        d["freq3_ok"] = e.freq3_ok;
        return d;
    });

    m.def(
        "cover_terms",
        [](const py::sequence& pairs, int K, const std::string& s, int L) {
            const CoverSumSeries series = cover_terms(to_seq(pairs), K, Rational::parse(s), L);
            py::dict d;
            d["s"] = series.s.to_string();
            d["L"] = series.L;
            d["K"] = series.K;
            d["decay_flag"] = series.decay_flag;
            py::list terms;
            for (const auto& t : series.terms) {
                py::dict td;
                td["k"] = t.k;
                td["b_k2"] = from_big(t.b_k2);
                td["lambda3_I2k"] = t.lambda3_I2k.to_string();
                td["term_pow_exact"] = t.term_pow.to_string();
                td["term_approx"] = t.term_approx;
                td["le_one"] = t.le_one;
                td["le_pow2"] = t.le_pow2;
                terms.append(td);
            }
            d["terms"] = terms;
            d["partial_sums_approx"] = series.partial_sum_approx;
            return d;
        },
        py::arg("pairs"), py::arg("K"), py::arg("s"), py::arg("L") = 1);

    m.def("critical_exponent", [](const py::sequence& pairs, int K, const std::string& tol) {
        const CriticalExponent ce = critical_exponent(to_seq(pairs), K, Rational::parse(tol));
        py::dict d;
        d["lo"] = ce.lo.to_string();
        d["hi"] = ce.hi.to_string();
        d["flag"] = ce.flag;
        d["evaluations"] = ce.evaluations;
        return d;
    });

    m.def("check_theorem2_condition", [](const py::sequence& pairs, const std::string& r, int k) {
        return json_to_py(report_to_json(check_theorem2_condition(to_seq(pairs), Rational::parse(r), k)));
    });
    m.def("check_theorem3_condition", [](const py::sequence& pairs, const std::string& r, int k) {
        const Theorem3Condition c = check_theorem3_condition(to_seq(pairs), Rational::parse(r), k);
        py::dict d;
        d["ratio"] = json_to_py(report_to_json(c.ratio));
        d["growth"] = json_to_py(report_to_json(c.growth));
        return d;
    });
    m.def("theorem4_proof_threshold", &theorem4_proof_threshold, py::arg("kmax") = 8);

    m.def(
        "recurrence_statistic",
        [](const std::vector<std::string>& lengths, const std::vector<int>& perm, const std::string& x,
           std::uint64_t horizon, const std::string& beta) {
            const RecurrenceSeries series =
                recurrence_statistic(to_iet(lengths, perm), Rational::parse(x), horizon, Rational::parse(beta));
            py::dict d;
            d["x0"] = series.x0.to_string();
            d["horizon"] = series.horizon;
            d["beta"] = series.beta.to_string();
            py::list recs;
            for (const auto& smp : series.records) {
                recs.append(py::dict(py::arg("n") = smp.n, py::arg("distance") = smp.distance.to_string(),
                                     py::arg("stat_pow_exact") = smp.stat_pow.to_string(),
                                     py::arg("stat_approx") = smp.stat_approx));
            }
            d["records"] = recs;
            d["minimum"] = py::dict(py::arg("n") = series.minimum.n, py::arg("distance") = series.minimum.distance.to_string(),
                                    py::arg("stat_approx") = series.minimum.stat_approx);
            d["breakpoint_hits"] = series.breakpoint_hits;
            return d;
        },
        py::arg("lengths"), py::arg("perm"), py::arg("x"), py::arg("horizon"), py::arg("beta") = "0");

    m.def(
        "separation_check",
        [](const py::sequence& pairs, int K, int k, std::uint64_t budget) {
            return json_to_py(report_to_json(separation_check(to_seq(pairs), K, k, budget)));
        },
        py::arg("pairs"), py::arg("K"), py::arg("k"), py::arg("budget") = 50'000'000ULL);

    m.def(
        "run_config",
        [](const std::string& config_json, const std::string& out_dir, const std::string& format, int threads) {
            const RunConfig cfg = parse_config(config_json);
            std::ostringstream log;
            const int code = run_command(cfg, out_dir, format, threads, log);
            return py::make_tuple(code, log.str());
        },
        py::arg("config_json"), py::arg("out_dir"), py::arg("format") = "both", py::arg("threads") = 1,
        "parse and run a CLI configuration; returns (exit_code, log_text)");
}
