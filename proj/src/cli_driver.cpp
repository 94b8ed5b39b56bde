#include "rloop/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "rloop/dressing.hpp"
#include "rloop/flows.hpp"
#include "rloop/serialization.hpp"

namespace rloop {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorClass::Io, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorClass::Io, "cannot write " + path);
    out << content;
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
}

NumMat num_matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty row array");
    std::size_t rows = j.size(), cols = j[0].size();
    NumMat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) throw ParseError("ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) {
            const Json& v = j[r][c];
            if (v.is_number())
                m.at(r, c) = v.get<double>();
            else if (v.is_string()) {
                Rat q = parse_rat(v.get<std::string>());
                m.at(r, c) = q.get_d();
            } else {
                throw ParseError("numeric matrix entries must be numbers");
            }
        }
    }
    return m;
}

Json residual_report_json(const ResidualReport& rep) {
    Json j;
    j["flow"] = rep.flow;
    j["h"] = rep.h;
    j["max_residual"] = rep.max_residual;
    j["masked_fraction"] = rep.masked_fraction;
    return j;
}

struct CliOptions {
    std::string group = "glnc";
    std::size_t p = 1, q = 1;
    std::string input, output;
    std::string reality;
    bool twisted = false;
    std::string mode = "simple";
    std::string alpha_text = "1";
    std::string nilpotent_file;
    std::string c_text = "[1]";
    std::string kind;
    double alpha = 1.0, n1 = 0.0, n2 = 1.0, n3 = 0.0;
    int j = 1;
    double xmin = -2, xmax = 2, tmin = -2, tmax = 2;
    double h = 1e-2, residual_h = 1e-3;
    double lambda = 1.0;
    std::string report_file;
};

int do_factor(const CliOptions& opt, std::ostream& out) {
    RationalLoop g = loop_from_json(parse_json(read_file(opt.input)));
    FactorizationResult res;
    if (opt.group == "glnc")
        res = factor_glnc(g);
    else if (opt.group == "glnr")
        res = factor_glnr(g);
    else if (opt.group == "upq")
        res = factor_upq(g, opt.p, opt.q);
    else
        throw ParseError("unknown group: " + opt.group);
    if (res.product(g.dim()) != g)
        throw Error(ErrorClass::Validation, "internal: factor product mismatch");
    write_file(opt.output, dump_canonical(factors_to_json(res.factors)));
    out << "factors: " << res.factors.size() << ", steps: " << res.journal.size() << "\n";
    return 0;
}

int do_multiply(const CliOptions& opt, std::ostream& out) {
    auto factors = factors_from_json(parse_json(read_file(opt.input)));
    if (factors.empty()) throw Error(ErrorClass::Validation, "empty factor list");
    RationalLoop g = RationalLoop::identity(factors[0].n);
    for (const auto& f : factors) g = g * f.loop;
    write_file(opt.output, dump_canonical(loop_to_json(g)));
    out << "product written: n = " << g.dim() << "\n";
    return 0;
}

int do_verify(const CliOptions& opt, std::ostream& out) {
    RationalLoop g = loop_from_json(parse_json(read_file(opt.input)));
    bool ok = true;
    if (opt.reality == "glnr") {
        bool r = g.check_glnr_reality().ok;
        out << "glnr-reality: " << (r ? "ok" : "failed") << "\n";
        ok = ok && r;
    } else if (opt.reality == "upq") {
        bool r = g.check_upq_reality(HermForm(opt.p, opt.q)).ok;
        out << "upq-reality(" << opt.p << "," << opt.q << "): " << (r ? "ok" : "failed") << "\n";
        ok = ok && r;
    } else if (!opt.reality.empty()) {
        throw ParseError("unknown reality mode: " + opt.reality);
    }
    if (opt.twisted) {
        bool r = g.check_twisted().ok;
        out << "twisted: " << (r ? "ok" : "failed") << "\n";
        ok = ok && r;
    }
    return ok ? 0 : 2;
}

int do_dress(const CliOptions& opt, std::ostream& out) {
    TowerScalar alpha = scalar_from_json(parse_json(opt.alpha_text));
    Mat nilp = matrix_from_json(parse_json(read_file(opt.nilpotent_file)));
    RationalLoop f = loop_from_json(parse_json(read_file(opt.input)));
    Json result;
    if (opt.mode == "simple") {
        auto d = dress_simple_pole(alpha, nilp, f);
        result["ntilde"] = matrix_to_json(d.n_tilde);
        result["dressed"] = loop_to_json(d.dressed);
    } else if (opt.mode == "order2") {
        auto d = dress_order2(alpha, nilp, f);
        result["m1"] = matrix_to_json(d.m1);
        result["m2"] = matrix_to_json(d.m2);
        result["dressed"] = loop_to_json(d.dressed);
    } else if (opt.mode == "pair") {
        SimpleElement s = make_twisted_pair(alpha, nilp);
        auto d = dress_twisted_pair(s, f);
        result["ntilde"] = matrix_to_json(d.n_tilde);
        result["ntilde_prime"] = matrix_to_json(d.n_tilde_prime);
        result["dressed"] = loop_to_json(d.dressed);
    } else {
        throw ParseError("unknown dress mode: " + opt.mode);
    }
    write_file(opt.output, dump_canonical(result));
    out << "dressed loop written\n";
    return 0;
}

int do_soliton(const CliOptions& opt, std::ostream& out) {
    GridSpec grid{opt.xmin, opt.xmax, opt.tmin, opt.tmax, opt.h, opt.h};
    SolutionSurface surface;
    ResidualReport rep;
    if (opt.kind == "vacuum") {
        surface = dress_vacuum_closed_form(opt.alpha, opt.j, opt.n1, opt.n2, opt.n3, grid);
        if (opt.j == 1) {
            rep = pde_residual(surface, FlowKind::TranslationJ1, opt.residual_h, 4);
        } else {
            // Cross-check the closed form against the dressing pipeline.
            NumMat nm(2, 2);
            nm.at(0, 0) = opt.n1;
            nm.at(0, 1) = opt.n2;
            nm.at(1, 0) = opt.n3;
            nm.at(1, 1) = -opt.n1;
            FlowSpec spec{2, {1.0, -1.0}, {}, opt.j};
            SolutionSurface pipe = dress_chain_numeric({{opt.alpha, nm}}, spec, grid);
            double worst = 0;
            for (std::size_t it = 0; it < grid.nt(); ++it)
                for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
                    double x = grid.x(ix), t = grid.t(it);
                    if (surface.masked(x, t) || pipe.masked(x, t)) continue;
                    worst = std::max(worst,
                                     (surface.eval(x, t) - pipe.eval(x, t)).norm_inf());
                }
            rep.flow = "vacuum_cross_check";
            rep.h = grid.hx;
            rep.max_residual = worst;
            rep.masked_fraction = surface.masked_fraction();
        }
    } else if (opt.kind == "mkdv") {
        surface = mkdv_closed_form(opt.alpha, opt.n1, opt.n2, opt.n3, grid);
        rep = pde_residual(surface, FlowKind::Mkdv, opt.residual_h, 4);
    } else if (opt.kind == "third") {
        surface = third_flow_order2(opt.n1, opt.n2, opt.n3, grid);
        rep = pde_residual(surface, FlowKind::ThirdCoupled, std::max(opt.residual_h, 8e-3), 6);
    } else {
        throw ParseError("unknown soliton kind: " + opt.kind);
    }
    write_file(opt.output, surface_to_csv(surface));
    if (!opt.report_file.empty())
        write_file(opt.report_file, dump_canonical(residual_report_json(rep)));
    out << "flow " << rep.flow << ": max residual " << rep.max_residual << ", masked fraction "
        << rep.masked_fraction << "\n";
    return 0;
}

int do_egoroff(const CliOptions& opt, std::ostream& out) {
    NumMat nilp = num_matrix_from_json(parse_json(read_file(opt.nilpotent_file)));
    std::size_t n = nilp.rows();
    GlnOnSolution sol = gln_on_dress(n, opt.alpha, nilp);
    Json cj = parse_json(opt.c_text);
    std::vector<double> c;
    for (const auto& v : cj) c.push_back(v.get<double>());
    if (c.size() != n) throw ParseError("c has wrong length");

    std::ostringstream csv;
    csv.precision(17);
    for (std::size_t k = 0; k < n; ++k) csv << (k ? "," : "") << "x" << (k + 1);
    for (std::size_t k = 0; k < n; ++k) csv << ",h" << (k + 1);
    for (std::size_t k = 0; k < n; ++k) csv << ",Xre" << (k + 1) << ",Xim" << (k + 1);
    csv << "\n";
    std::vector<double> xs(n, opt.xmin);
    while (true) {
        bool ok = true;
        EgoroffData data = egoroff_reconstruct(sol, c, xs, opt.lambda, &ok);
        for (std::size_t k = 0; k < n; ++k) csv << (k ? "," : "") << xs[k];
        if (ok) {
            for (std::size_t k = 0; k < n; ++k) csv << "," << data.h[k].real();
            for (std::size_t k = 0; k < n; ++k)
                csv << "," << data.x_immersion[k].real() << "," << data.x_immersion[k].imag();
        } else {
            for (std::size_t k = 0; k < 3 * n; ++k) csv << ",nan";
        }
        csv << "\n";
        std::size_t axis = 0;
        while (axis < n) {
            xs[axis] += opt.h;
            if (xs[axis] <= opt.xmax + 1e-12) break;
            xs[axis] = opt.xmin;
            ++axis;
        }
        if (axis == n) break;
    }
    write_file(opt.output, csv.str());
    out << "metric surface written\n";
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact rational-loop factorization and dressing engine"};
    app.require_subcommand(1);
    CliOptions opt;

    auto* factor = app.add_subcommand("factor", "factor a negative loop into simple elements");
    factor->add_option("--group", opt.group, "glnc, glnr or upq");
    factor->add_option("--p", opt.p, "signature p (upq)");
    factor->add_option("--q", opt.q, "signature q (upq)");
    factor->add_option("-i,--input", opt.input)->required();
    factor->add_option("-o,--output", opt.output)->required();

    auto* multiply = app.add_subcommand("multiply", "multiply a factor list back into a loop");
    multiply->add_option("-i,--input", opt.input)->required();
    multiply->add_option("-o,--output", opt.output)->required();

    auto* verify = app.add_subcommand("verify", "check reality/twisting identities exactly");
    verify->add_option("-i,--input", opt.input)->required();
    verify->add_option("--reality", opt.reality, "glnr or upq");
    verify->add_option("--p", opt.p);
    verify->add_option("--q", opt.q);
    verify->add_flag("--twisted", opt.twisted);

    auto* dress = app.add_subcommand("dress", "dress a holomorphic loop by a nilpotent element");
    dress->add_option("--mode", opt.mode, "simple, order2 or pair");
    dress->add_option("--alpha", opt.alpha_text, "pole location (JSON scalar)");
    dress->add_option("--nilpotent,--N", opt.nilpotent_file, "JSON matrix file")->required();
    dress->add_option("-i,--input", opt.input)->required();
    dress->add_option("-o,--output", opt.output)->required();

    auto* soliton = app.add_subcommand("soliton", "emit a solution surface with residuals");
    soliton->add_option("kind", opt.kind, "vacuum, mkdv or third")->required();
    soliton->add_option("--alpha", opt.alpha);
    soliton->add_option("--n1", opt.n1);
    soliton->add_option("--n2", opt.n2);
    soliton->add_option("--n3", opt.n3);
    soliton->add_option("--j", opt.j);
    soliton->add_option("--xmin", opt.xmin);
    soliton->add_option("--xmax", opt.xmax);
    soliton->add_option("--tmin", opt.tmin);
    soliton->add_option("--tmax", opt.tmax);
    soliton->add_option("--h", opt.h, "surface grid spacing");
    soliton->add_option("--residual-h", opt.residual_h, "finite-difference step");
    soliton->add_option("-o,--output", opt.output)->required();
    soliton->add_option("--residual-report", opt.report_file);

    auto* egoroff = app.add_subcommand("egoroff", "dressed flat metric and immersion samples");
    egoroff->add_option("--alpha", opt.alpha);
    egoroff->add_option("--nilpotent,--N", opt.nilpotent_file)->required();
    egoroff->add_option("--c", opt.c_text, "metric vector at the origin (JSON array)");
    egoroff->add_option("--lambda", opt.lambda);
    egoroff->add_option("--xmin", opt.xmin);
    egoroff->add_option("--xmax", opt.xmax);
    egoroff->add_option("--h", opt.h);
    egoroff->add_option("-o,--output", opt.output)->required();

    std::vector<std::string> argv = args;
    try {
        std::vector<const char*> ptrs;
        ptrs.push_back("rloop");
        for (const auto& a : argv) ptrs.push_back(a.c_str());
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(factor)) return do_factor(opt, out);
        if (app.got_subcommand(multiply)) return do_multiply(opt, out);
        if (app.got_subcommand(verify)) return do_verify(opt, out);
        if (app.got_subcommand(dress)) return do_dress(opt, out);
        if (app.got_subcommand(soliton)) return do_soliton(opt, out);
        if (app.got_subcommand(egoroff)) return do_egoroff(opt, out);
        err << "no subcommand\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.error_class());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rloop
