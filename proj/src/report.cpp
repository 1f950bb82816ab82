#include "kerlab/report.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace kerlab {

namespace {

void reject_unknown_keys(const ojson& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
}

cd parse_complex(const ojson& v, const std::string& where) {
    if (v.is_number()) return cd(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cd(v[0].get<double>(), v[1].get<double>());
    throw std::invalid_argument("config: " + where + " must be a number or [re, im]");
}

std::vector<cd> parse_points(const ojson& v, const std::string& where) {
    if (!v.is_array()) throw std::invalid_argument("config: " + where + " must be an array");
    std::vector<cd> out;
    for (size_t i = 0; i < v.size(); ++i) out.push_back(parse_complex(v[i], where));
    return out;
}

Domain parse_domain(const ojson& d, const std::string& where) {
    reject_unknown_keys(d, {"kind", "center", "radius", "r_inner", "r_outer"}, where);
    if (!d.contains("kind")) throw std::invalid_argument("config: " + where + ".kind missing");
    const std::string kind = d.at("kind").get<std::string>();
    const cd center = d.contains("center") ? parse_complex(d.at("center"), where + ".center") : cd(0.0, 0.0);
    if (kind == "disc") return Domain::disc(center, d.value("radius", 1.0));
    if (kind == "annulus") return Domain::annulus(center, d.value("r_inner", 0.5), d.value("r_outer", 1.0));
    throw std::invalid_argument("config: " + where + ".kind must be disc or annulus");
}

HarmonicField parse_harmonic_field(const ojson& h, const std::string& where) {
    reject_unknown_keys(h, {"poly", "log_coeff", "green"}, where);
    HarmonicField f;
    if (h.contains("poly")) f.poly_coeffs = parse_points(h.at("poly"), where + ".poly");
    f.log_coeff = h.value("log_coeff", 0.0);
    if (h.contains("green")) {
        for (const auto& g : h.at("green")) {
            reject_unknown_keys(g, {"a", "t"}, where + ".green[]");
            f.green_terms.push_back({g.at("a").get<double>(), parse_complex(g.at("t"), where + ".green[].t")});
        }
    }
    return f;
}

CFunction parse_cfunction(const ojson& c, const std::string& where) {
    if (c.is_string()) {
        const std::string s = c.get<std::string>();
        if (s == "one") return CFunction::one();
        throw std::invalid_argument("config: " + where + " string form must be 'one'");
    }
    reject_unknown_keys(c, {"kind", "eps"}, where);
    const std::string kind = c.at("kind").get<std::string>();
    if (kind == "one") return CFunction::one();
    if (kind == "exp-decay") return CFunction::exp_decay(c.value("eps", 0.5));
    throw std::invalid_argument("config: " + where + ".kind must be one or exp-decay");
}

JetSpec parse_jets(const ojson& j) {
    reject_unknown_keys(j, {"beta_prime", "beta_tilde_prime", "beta_dprime", "beta_tilde_dprime",
                            "l_coeffs", "b_coeffs"},
                        "jets");
    JetSpec js;
    for (const auto& v : j.value("beta_prime", ojson::array())) js.beta_prime.push_back(v.get<int>());
    for (const auto& v : j.value("beta_tilde_prime", ojson::array())) js.beta_tilde_prime.push_back(v.get<int>());
    for (const auto& v : j.value("beta_dprime", ojson::array())) js.beta_dprime.push_back(v.get<int>());
    for (const auto& v : j.value("beta_tilde_dprime", ojson::array()))
        js.beta_tilde_dprime.push_back(v.get<int>());
    if (j.contains("l_coeffs"))
        for (const auto& row : j.at("l_coeffs")) js.l_coeffs.push_back(parse_points(row, "jets.l_coeffs[]"));
    if (j.contains("b_coeffs")) js.b_coeffs = parse_points(j.at("b_coeffs"), "jets.b_coeffs");
    return js;
}

}  // namespace

RunConfig parse_run_config(const ojson& doc) {
    reject_unknown_keys(doc, {"command", "id", "identity", "domain", "domains", "fiber", "weights", "jets",
                              "basis", "quad", "radial", "angular", "tol", "seed", "samples", "sweep",
                              "kernel", "out", "format"},
                        "config");
    RunConfig cfg;
    if (!doc.contains("command")) throw std::invalid_argument("config: command missing");
    cfg.command = doc.at("command").get<std::string>();
    static const std::set<std::string> commands{"kernel", "verify", "theorem", "sweep", "suite"};
    if (!commands.count(cfg.command)) throw std::invalid_argument("config: unknown command " + cfg.command);

    if (doc.contains("id")) cfg.theorem_id = doc.at("id").get<std::string>();
    if (doc.contains("identity")) cfg.identity = doc.at("identity").get<std::string>();
    if (doc.contains("domain")) cfg.domains.push_back(parse_domain(doc.at("domain"), "domain"));
    if (doc.contains("domains"))
        for (const auto& d : doc.at("domains")) cfg.domains.push_back(parse_domain(d, "domains[]"));
    if (doc.contains("fiber"))
        for (const auto& d : doc.at("fiber")) cfg.fiber.push_back(parse_domain(d, "fiber[]"));

    if (doc.contains("weights")) {
        const ojson& w = doc.at("weights");
        reject_unknown_keys(w, {"p", "z0", "u0", "c", "phi", "gamma_scale", "gamma_exponents"}, "weights");
        if (w.contains("p"))
            for (const auto& v : w.at("p")) cfg.p.push_back(v.get<double>());
        if (w.contains("z0")) cfg.z0 = parse_points(w.at("z0"), "weights.z0");
        if (w.contains("u0")) cfg.u0 = parse_points(w.at("u0"), "weights.u0");
        if (w.contains("c")) cfg.c = parse_cfunction(w.at("c"), "weights.c");
        if (w.contains("phi"))
            for (const auto& h : w.at("phi")) cfg.phi.push_back(parse_harmonic_field(h, "weights.phi[]"));
        cfg.gamma_scale = w.value("gamma_scale", 1.0);
        if (w.contains("gamma_exponents"))
            for (const auto& h : w.at("gamma_exponents"))
                cfg.gamma_exponent.push_back(parse_harmonic_field(h, "weights.gamma_exponents[]"));
    }
    if (doc.contains("jets")) cfg.jets = parse_jets(doc.at("jets"));

    cfg.basis = doc.value("basis", cfg.basis);
    cfg.quad = doc.value("quad", cfg.quad);
    cfg.radial = doc.value("radial", cfg.radial);
    cfg.angular = doc.value("angular", cfg.angular);
    cfg.tol = doc.value("tol", cfg.tol);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.samples = doc.value("samples", cfg.samples);

    if (doc.contains("sweep")) {
        const ojson& s = doc.at("sweep");
        reject_unknown_keys(s, {"axis", "from", "to", "count"}, "sweep");
        cfg.sweep_axis = s.value("axis", cfg.sweep_axis);
        cfg.sweep_from = s.value("from", cfg.sweep_from);
        cfg.sweep_to = s.value("to", cfg.sweep_to);
        cfg.sweep_count = s.value("count", cfg.sweep_count);
    }
    if (doc.contains("kernel")) {
        const ojson& k = doc.at("kernel");
        reject_unknown_keys(k, {"space", "z", "w"}, "kernel");
        cfg.kernel_space = k.value("space", cfg.kernel_space);
        if (k.contains("z")) cfg.kernel_z = parse_points(k.at("z"), "kernel.z");
        if (k.contains("w")) cfg.kernel_w = parse_points(k.at("w"), "kernel.w");
    }
    if (doc.contains("out")) cfg.out_dir = doc.at("out").get<std::string>();
    if (doc.contains("format")) {
        cfg.formats.clear();
        for (const auto& f : doc.at("format")) cfg.formats.push_back(f.get<std::string>());
        for (const auto& f : cfg.formats)
            if (f != "json" && f != "csv" && f != "svg")
                throw std::invalid_argument("config: format must be json, csv or svg");
    }
    if (cfg.sweep_count < 1) throw std::invalid_argument("config: sweep.count >= 1");
    if (cfg.basis < 1 || cfg.quad < 8) throw std::invalid_argument("config: basis >= 1 and quad >= 8");
    return cfg;
}

RunConfig parse_run_config_text(const std::string& text) {
    ojson doc;
    try {
        doc = ojson::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    return parse_run_config(doc);
}

ojson report_to_json(const InequalityReport& rep) {
    ojson o;
    o["id"] = rep.id;
    o["lhs"] = rep.lhs;
    o["rhs"] = rep.rhs;
    o["ratio"] = rep.ratio;
    o["constant_used"] = rep.constant_used;
    o["sizes"] = ojson{{"basis", rep.basis_degree}, {"quad", rep.quad_nodes}};
    o["refinement_delta"] = rep.refinement_delta;
    o["verdict"] = verdict_name(rep.verdict);
    if (rep.parameter) o["parameter"] = *rep.parameter;
    return o;
}

ojson report_to_json(const VerificationReport& rep) {
    ojson o;
    o["id"] = rep.identity;
    o["lhs"] = rep.worst_direct;
    o["rhs"] = rep.worst_factored;
    o["ratio"] = rep.worst_factored != 0.0 ? rep.worst_direct / rep.worst_factored : 1.0;
    o["constant_used"] = 1.0;
    o["sizes"] = ojson{{"samples", rep.samples}};
    o["refinement_delta"] = rep.max_rel_err;
    o["verdict"] = rep.pass ? "equality" : "violation-flag";
    return o;
}

WeightField field_from_config(const RunConfig& cfg) {
    WeightField f;
    f.factors = cfg.domains;
    if (f.factors.empty()) f.factors.push_back(Domain::disc(cd(0, 0), 1.0));
    const int n = f.n();

    f.z0 = cfg.z0;
    if (f.z0.empty()) {
        for (const Domain& d : f.factors) {
            if (d.is_annulus()) {
                const double r = std::sqrt(d.inner_radius() * d.outer_radius());
                f.z0.push_back(d.center() + cd(r, 0.0));
            } else {
                f.z0.push_back(d.center());
            }
        }
    }
    f.p = cfg.p;
    if (f.p.empty()) f.p.assign(n, n >= 2 ? static_cast<double>(n) : 1.0);
    f.phi = cfg.phi;
    if (f.phi.empty()) f.phi.assign(n, HarmonicField{});
    f.c = cfg.c;

    f.fiber_factors = cfg.fiber;
    f.u0 = cfg.u0;
    if (f.u0.empty())
        for (const Domain& d : f.fiber_factors) f.u0.push_back(d.center());
    f.gamma_exponent = cfg.gamma_exponent;
    f.gamma_scale = cfg.gamma_scale;
    f.validate();
    return f;
}

namespace {

SpaceKind space_from_string(const std::string& s, bool has_fiber) {
    if (s == "area") return has_fiber ? SpaceKind::AreaFiber : SpaceKind::Area;
    if (s == "boundary") return has_fiber ? SpaceKind::ProductBoundaryFiber : SpaceKind::ProductBoundary;
    if (s == "distinguished") return has_fiber ? SpaceKind::DistinguishedFiber : SpaceKind::Distinguished;
    throw std::invalid_argument("config: kernel.space must be area, boundary or distinguished");
}

TheoremConfig theorem_config_from(const RunConfig& cfg) {
    TheoremConfig tc;
    tc.id = theorem_from_string(cfg.theorem_id);
    tc.field = field_from_config(cfg);
    tc.jets = cfg.jets;
    tc.basis_degree = cfg.basis;
    tc.boundary_nodes = cfg.quad;
    tc.radial_nodes = cfg.radial;
    tc.angular_nodes = cfg.angular;
    return tc;
}

ojson suite_reports(const RunConfig& cfg);

}  // namespace

std::string sweep_csv(const std::vector<InequalityReport>& reports) {
    std::ostringstream os;
    os.precision(17);
    os << "parameter,lhs,rhs,ratio,refinement_delta\n";
    for (const auto& r : reports) {
        os << (r.parameter ? *r.parameter : 0.0) << ',' << r.lhs << ',' << r.rhs << ',' << r.ratio << ','
           << r.refinement_delta << '\n';
    }
    return os.str();
}

std::string sweep_svg(const std::vector<InequalityReport>& reports, const std::string& title) {
    const int w = 640, h = 400, margin = 60;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& r : reports) {
        const double x = r.parameter ? *r.parameter : 0.0;
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, r.ratio);
        ymax = std::max(ymax, r.ratio);
    }
    if (reports.empty()) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

    auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); };
    auto py = [&](double y) { return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin); };

    std::ostringstream os;
    os.precision(10);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='14'>" << title
       << " (ratio vs parameter)</text>\n";
    os << "<line x1='" << margin << "' y1='" << h - margin << "' x2='" << w - margin << "' y2='" << h - margin
       << "' stroke='black'/>\n";
    os << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='" << h - margin
       << "' stroke='black'/>\n";
    if (ymin <= 1.0 && 1.0 <= ymax)
        os << "<line x1='" << margin << "' y1='" << py(1.0) << "' x2='" << w - margin << "' y2='" << py(1.0)
           << "' stroke='#999' stroke-dasharray='4'/>\n";
    os << "<polyline fill='none' stroke='#1f77b4' stroke-width='2' points='";
    for (const auto& r : reports) os << px(r.parameter ? *r.parameter : 0.0) << ',' << py(r.ratio) << ' ';
    os << "'/>\n";
    for (const auto& r : reports)
        os << "<circle cx='" << px(r.parameter ? *r.parameter : 0.0) << "' cy='" << py(r.ratio)
           << "' r='3' fill='#1f77b4'/>\n";
    os << "<text x='" << margin << "' y='" << h - margin + 30 << "' font-size='12'>" << xmin << "</text>\n";
    os << "<text x='" << w - margin << "' y='" << h - margin + 30 << "' text-anchor='end' font-size='12'>" << xmax
       << "</text>\n";
    os << "<text x='" << margin - 8 << "' y='" << py(ymin) << "' text-anchor='end' font-size='12'>" << ymin
       << "</text>\n";
    os << "<text x='" << margin - 8 << "' y='" << py(ymax) << "' text-anchor='end' font-size='12'>" << ymax
       << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

namespace {

ProductSpaceSpec product_spec_from(const RunConfig& cfg) {
    ProductSpaceSpec spec;
    spec.field = field_from_config(cfg);
    spec.degree = std::min(cfg.basis, 6);
    spec.boundary_nodes = std::min(cfg.quad, 48);
    spec.radial_nodes = std::min(cfg.radial, 6);
    spec.angular_nodes = std::min(cfg.angular, 16);
    return spec;
}

ojson suite_reports(const RunConfig& cfg) {
    ojson arr = ojson::array();

    // Theorem set on the standard equality/strictness configurations.
    {
        RunConfig c = cfg;
        c.domains = {Domain::disc(cd(0, 0), 1.0)};
        c.z0.clear();
        c.p.clear();
        c.phi.clear();
        for (const char* id : {"thm1.2", "thm1.3"}) {
            c.theorem_id = id;
            arr.push_back(report_to_json(eval_theorem(theorem_config_from(c))));
        }
    }
    {
        // The annulus strictness gap is a few 1e-6 at modulus 0.5; the Laurent
        // range must be wide enough that truncation error sits well below it.
        RunConfig c = cfg;
        c.domains = {Domain::annulus(cd(0, 0), 0.5, 1.0)};
        c.z0 = {cd(std::sqrt(0.5), 0.0)};
        c.p.clear();
        c.phi.clear();
        c.theorem_id = "thm1.2";
        c.basis = std::max(cfg.basis, 40);
        c.quad = std::max(cfg.quad, 512);
        arr.push_back(report_to_json(eval_theorem(theorem_config_from(c))));
    }
    {
        RunConfig c = cfg;
        c.domains = {Domain::disc(cd(0, 0), 1.0), Domain::disc(cd(0, 0), 1.0)};
        c.z0.clear();
        c.p = {2.0, 2.0};
        c.phi.clear();
        c.basis = std::min(cfg.basis, 8);
        for (const char* id : {"thm1.8", "thm1.13"}) {
            c.theorem_id = id;
            arr.push_back(report_to_json(eval_theorem(theorem_config_from(c))));
        }
        c.fiber = {Domain::disc(cd(0, 0), 1.0)};
        for (const char* id : {"thm1.10", "thm1.15"}) {
            c.theorem_id = id;
            arr.push_back(report_to_json(eval_theorem(theorem_config_from(c))));
        }
    }

    // Decomposition identity set on a bidisc with a disc fiber.
    {
        RunConfig c = cfg;
        c.domains = {Domain::disc(cd(0, 0), 1.0), Domain::disc(cd(0.1, 0.0), 1.2)};
        c.z0 = {cd(0.15, 0.1), cd(0.2, -0.05)};
        c.p = {2.0, 2.0};
        c.fiber = {Domain::disc(cd(0, 0), 1.0)};
        c.u0 = {cd(0.1, 0.1)};
        c.phi = {HarmonicField{{cd(0, 0), cd(0.2, 0.1)}, 0.0, {}}, HarmonicField{}};
        ProductSpaceSpec spec = product_spec_from(c);
        spec.degree = 3;
        for (const char* name : {"3:E4", "3:E8", "Pro-28", "Berg-decomp", "eq-1", "key-decomp1", "S-decomp"}) {
            const Identity id = identity_from_string(name);
            ProductSpaceSpec s = spec;
            if (id == Identity::E3_4) {
                s.field.factors.resize(1);
                s.field.z0.resize(1);
                s.field.p.resize(1);
                s.field.phi.resize(1);
            }
            arr.push_back(report_to_json(verify_decomposition(id, s, cfg.samples, cfg.seed, cfg.tol)));
        }
    }
    return arr;
}

}  // namespace

RunOutcome run_config(const RunConfig& cfg) {
    RunOutcome out;
    try {
        if (cfg.command == "theorem") {
            out.report = ojson::array({report_to_json(eval_theorem(theorem_config_from(cfg)))});
        } else if (cfg.command == "verify") {
            ProductSpaceSpec spec = product_spec_from(cfg);
            if (cfg.domains.empty()) {
                spec.field.factors = {Domain::disc(cd(0, 0), 1.0), Domain::disc(cd(0, 0), 1.0)};
                spec.field.z0 = {cd(0.2, 0.1), cd(-0.1, 0.15)};
                spec.field.p = {2.0, 2.0};
                spec.field.phi.assign(2, HarmonicField{});
            }
            const Identity id = identity_from_string(cfg.identity);
            const bool needs_u = id != Identity::E3_8;
            if (needs_u && spec.field.fiber_factors.empty()) {
                spec.field.fiber_factors = {Domain::disc(cd(0, 0), 1.0)};
                spec.field.u0 = {cd(0.1, 0.05)};
            }
            if (id == Identity::E3_4) {
                spec.field.factors.resize(1);
                spec.field.z0.resize(1);
                spec.field.p.resize(1);
                spec.field.phi.resize(1);
            }
            spec.degree = std::min(spec.degree, 3);
            const VerificationReport rep = verify_decomposition(id, spec, cfg.samples, cfg.seed, cfg.tol);
            out.report = ojson::array({report_to_json(rep)});
            if (!rep.pass) {
                out.exit_code = 3;
                out.error = "identity " + rep.identity + " exceeded tolerance";
            }
        } else if (cfg.command == "sweep") {
            TheoremConfig tc = theorem_config_from(cfg);
            std::vector<double> grid;
            for (int i = 0; i < cfg.sweep_count; ++i) {
                grid.push_back(cfg.sweep_count == 1
                                   ? cfg.sweep_from
                                   : cfg.sweep_from + (cfg.sweep_to - cfg.sweep_from) * i / (cfg.sweep_count - 1));
            }
            const SweepResult res = sweep(tc, sweep_axis_from_string(cfg.sweep_axis), grid);
            out.report = ojson::array();
            for (const auto& r : res.reports) out.report.push_back(report_to_json(r));
            if (!res.errors.empty()) {
                ojson errs = ojson::array();
                for (const auto& e : res.errors) errs.push_back(e);
                out.report.push_back(ojson{{"id", "sweep-errors"}, {"errors", errs}});
            }
            out.csv = sweep_csv(res.reports);
            out.svg = sweep_svg(res.reports, cfg.theorem_id + " over " + cfg.sweep_axis);
        } else if (cfg.command == "kernel") {
            ProductSpaceSpec spec = product_spec_from(cfg);
            spec.degree = std::min(cfg.basis, spec.field.n() + spec.field.m() > 1 ? 6 : 24);
            spec.space = space_from_string(cfg.kernel_space, spec.field.m() > 0);
            std::vector<cd> z = cfg.kernel_z;
            if (z.empty()) {
                z.assign(spec.field.z0.begin(), spec.field.z0.end());
                z.insert(z.end(), spec.field.u0.begin(), spec.field.u0.end());
            }
            const std::vector<cd> w = cfg.kernel_w.empty() ? z : cfg.kernel_w;
            const cd value = direct_kernel(spec, z, w);
            ojson o;
            o["id"] = "kernel:" + cfg.kernel_space;
            o["value_re"] = value.real();
            o["value_im"] = value.imag();
            o["sizes"] = ojson{{"basis", spec.degree}, {"quad", spec.boundary_nodes}};
            out.report = ojson::array({o});
        } else if (cfg.command == "suite") {
            out.report = suite_reports(cfg);
            for (const auto& o : out.report) {
                if (o.contains("verdict") && o.at("verdict").get<std::string>() == "violation-flag") {
                    out.exit_code = 3;
                    out.error = "suite: violation flagged in " + o.at("id").get<std::string>();
                }
            }
        } else {
            throw std::invalid_argument("config: unknown command " + cfg.command);
        }
    } catch (const std::invalid_argument& e) {
        out.exit_code = 2;
        out.error = e.what();
    } catch (const std::exception& e) {
        out.exit_code = 3;
        out.error = e.what();
    }
    return out;
}

}  // namespace kerlab
