// Command-line front end: every subcommand writes its artifacts under
// <out>/<hash of the job config>/ and prints the main JSON result to stdout.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "melnikov.hpp"

namespace fs = std::filesystem;
using namespace melnikov;

namespace {

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

/// "a:b:n" for n evenly spaced points, or a comma-separated list.
std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    try {
        if (s.find(':') != std::string::npos) {
            std::stringstream ss(s);
            std::string a, b, n;
            std::getline(ss, a, ':');
            std::getline(ss, b, ':');
            std::getline(ss, n, ':');
            const double lo = std::stod(a), hi = std::stod(b);
            const int m = std::stoi(n);
            if (m < 1) throw ValidationError("grid needs at least one point");
            for (int i = 0; i < m; ++i) out.push_back(m == 1 ? lo : lo + (hi - lo) * i / (m - 1));
        } else {
            std::stringstream ss(s);
            std::string v;
            while (std::getline(ss, v, ',')) out.push_back(std::stod(v));
        }
    } catch (const std::invalid_argument&) {
        throw ValidationError("cannot parse grid '" + s + "'");
    }
    if (out.empty()) throw ValidationError("empty grid '" + s + "'");
    return out;
}

struct Job {
    std::string command;
    std::string ham = "eight-loop";
    std::string annulus = "exterior";
    std::string form;
    std::string form_file;
    std::string t_grid;
    std::string eps_grid = "1e-3,2e-3,4e-3,8e-3";
    std::string integrand = "I0";
    std::string word;
    std::string twist = "d4-l0";
    std::string out = "runs";
    int k_max = 6;
    int samples = 200;
    bool worked_example = false;
    bool pretty = false;

    json config() const {
        // Output location and formatting do not change results, so they stay out of the hash.
        return {{"command", command},   {"ham", ham},       {"annulus", annulus},   {"form", form},
                {"t_grid", t_grid},     {"eps_grid", eps_grid}, {"integrand", integrand}, {"word", word},
                {"twist", twist},       {"k_max", k_max},   {"samples", samples},   {"worked_example", worked_example}};
    }
};

class Runner {
public:
    explicit Runner(Job j) : job_(std::move(j)) {
        if (!job_.form_file.empty()) {
            std::ifstream in(job_.form_file);
            if (!in) throw ValidationError("cannot read form file '" + job_.form_file + "'");
            std::stringstream ss;
            ss << in.rdbuf();
            job_.form = ss.str();
            job_.form_file.clear();
        }
        const std::string cfg = job_.config().dump();
        dir_ = fs::path(job_.out) / sha256_hex(cfg).substr(0, 16);
        fs::create_directories(dir_);
        write("config.json", job_.config().dump(2) + "\n");
    }

    int run() {
        json r;
        const auto& c = job_.command;
        if (c == "decompose") r = decompose_cmd();
        else if (c == "melnikov") r = melnikov_cmd();
        else if (c == "d4") r = d4_cmd();
        else if (c == "sample") r = sample_cmd();
        else if (c == "compare") r = compare_cmd();
        else if (c == "zeros") r = zeros_cmd();
        else if (c == "pair") r = pair_cmd();
        else throw ValidationError("unknown subcommand '" + c + "'");
        r["job_dir"] = dir_.string();
        write("result.json", r.dump(2) + "\n");
        std::cout << r.dump(job_.pretty ? 2 : -1) << "\n";
        return 0;
    }

private:
    void write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name) << text;
    }
    OneForm form() const {
        if (job_.form.empty()) throw ValidationError("--form is required");
        return parse_form(job_.form);
    }
    HamiltonianSpec spec() const { return make_spec(parse_hamiltonian(job_.ham)); }
    Annulus annulus() const {
        const Annulus a = parse_annulus(job_.annulus);
        if (!spec().annulus_valid(a)) throw ValidationError("annulus '" + job_.annulus + "' does not exist for " + job_.ham);
        return a;
    }
    int degree() const {
        const OneForm w = form();
        int n = 0;
        for (const auto* p : {&w.a, &w.b})
            for (const auto& [m, c] : p->terms()) n = std::max(n, m.i + m.j + 2 * m.k + 1);
        return n;
    }
    std::vector<double> t_grid(const HamiltonianSpec& sp, Annulus a) const {
        if (!job_.t_grid.empty()) return parse_grid(job_.t_grid);
        const auto [lo, hi] = sampling_window(sp, a);
        std::vector<double> g;
        for (int i = 1; i <= 5; ++i) g.push_back(lo + (hi - lo) * i / 6);  // endpoints excluded
        return g;
    }
    bool is_d4() const { return parse_hamiltonian(job_.ham) == HamiltonianId::D4Triangle; }

    json decompose_cmd() {
        const auto sp = spec();
        const OneForm w = form();
        const Decomposition d = decompose(w, sp);
        return {{"form", to_json(w)}, {"hamiltonian", job_.ham}, {"decomposition", to_json(d)}};
    }

    json melnikov_cmd() {
        if (is_d4()) return d4_cmd();
        const auto sp = spec();
        ChainOptions opt;
        opt.k_max = job_.k_max;
        const OneForm w = form();
        const ChainResult r = francoise_chain(w, sp, annulus(), opt);
        json out = {{"form", to_json(w)}, {"hamiltonian", job_.ham}, {"annulus", job_.annulus}, {"chain", to_json(r)}};
        if (!r.all_zero()) {
            out["shape_violations"] = shape_violations(r.M, sp);
            out["zero_bound"] = zero_bound(sp.id, annulus(), r.M.n, r.M.k);
        }
        return out;
    }

    json d4_cmd() {
        OneForm w;
        if (job_.worked_example || job_.form.empty()) {
            w = parse_form("-2 dy + x dy - 1/2*x^2 dy");
        } else {
            w = form();
        }
        const D4Chain ch = d4_chain(w);
        json out = {{"chain", to_json(ch)}};
        if (!ch.integrable) {
            const FuchsOde ode = d4_fuchs_ode(ch.M3);
            json ex = json::object();
            for (const auto& s : ode.singular_points()) ex[to_string(s)] = to_json(d4_local_exponents(ode, s));
            ex["inf"] = to_json(d4_local_exponents(ode, std::nullopt));
            out["ode"] = to_json(ode);
            out["local_exponents"] = ex;
            write("ode.txt", ode.to_string() + "\n");
        }
        return out;
    }

    json sample_cmd() {
        const auto sp = spec();
        const Annulus a = is_d4() ? Annulus::Center : annulus();
        const auto grid = t_grid(sp, a);
        std::ostringstream csv;
        csv << std::setprecision(17) << "t,value,source\n";
        json rows = json::array();
        for (double t : grid) {
            require_inside_sigma(sp, a, t);
            const Oval ov = trace_oval(sp, t, a);
            double v = 0;
            const auto& in = job_.integrand;
            if (!job_.form.empty() && in == "form") v = integrate(ov, form());
            else if (in == "Istar") v = moment_star(ov);
            else if (in.size() >= 2 && in[0] == 'I') v = moment(ov, std::stoi(in.substr(1)));
            else throw ValidationError("integrand must be Ik, Istar or form");
            csv << t << "," << v << ",quadrature\n";
            rows.push_back({{"t", t}, {"value", v}});
        }
        write("sample.csv", csv.str());
        return {{"integrand", job_.integrand}, {"rows", rows}, {"csv", (dir_ / "sample.csv").string()}};
    }

    json compare_cmd() {
        const auto sp = spec();
        const OneForm w = form();
        std::function<double(double)> sym;
        int k_sym = 0;
        Annulus a = Annulus::Center;
        json symbolic;
        if (is_d4()) {
            const D4Chain ch = d4_chain(w);
            if (ch.integrable) throw ValidationError("perturbation is integrable: nothing to compare");
            k_sym = 3;
            sym = [g = ch.M3](double t) { return evaluate(g, t); };
            symbolic = to_json(ch.M3);
        } else {
            a = annulus();
            const ChainResult r = francoise_chain(w, sp, a, ChainOptions{job_.k_max});
            if (r.all_zero()) throw ValidationError("all M_k vanish up to k_max: nothing to compare");
            k_sym = r.M.k;
            sym = [g = r.M](double t) { return evaluate(g, t); };
            symbolic = to_json(r.M);
        }
        const auto grid = t_grid(sp, a);
        const MelnikovSample s = shooting_oracle(sp, w, a, grid, parse_grid(job_.eps_grid), sym);
        std::ostringstream csv;
        csv << std::setprecision(17) << "t,value,source\n";
        json pts = json::array();
        bool agree = true;
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            csv << s.t[i] << "," << s.symbolic[i] << ",symbolic\n";
            csv << s.t[i] << "," << s.shooting[i] << ",shooting\n";
            const double rel = std::abs(s.shooting[i] - s.symbolic[i]) / std::max(std::abs(s.symbolic[i]), 1e-300);
            agree = agree && rel < 1e-3 && s.fits[i].k == k_sym;
            pts.push_back({{"t", s.t[i]},
                           {"symbolic", s.symbolic[i]},
                           {"shooting", s.shooting[i]},
                           {"relative_difference", rel},
                           {"fitted_k", s.fits[i].k},
                           {"slope", s.fits[i].slope},
                           {"fit_residual", s.fits[i].residual}});
        }
        write("compare.csv", csv.str());
        return {{"symbolic_k", k_sym}, {"symbolic", symbolic}, {"points", pts}, {"agree", agree},
                {"csv", (dir_ / "compare.csv").string()}};
    }

    json zeros_cmd() {
        const auto sp = spec();
        const OneForm w = form();
        ZeroCount z;
        std::pair<double, double> win;
        if (is_d4()) {
            const D4Chain ch = d4_chain(w);
            win = job_.t_grid.empty() ? sampling_window(sp, Annulus::Center) : window_from_grid();
            z = count_zeros(ch.M3, win, job_.samples);
        } else {
            const Annulus a = annulus();
            const ChainResult r = francoise_chain(w, sp, a, ChainOptions{job_.k_max});
            if (r.all_zero()) throw ValidationError("all M_k vanish up to k_max");
            win = job_.t_grid.empty() ? sampling_window(sp, a) : window_from_grid();
            z = count_zeros(r.M, win, job_.samples);
        }
        json br = json::array();
        for (const auto& [lo, hi] : z.brackets) br.push_back({lo, hi});
        json out = {{"interval", {win.first, win.second}}, {"count", z.count}, {"brackets", br}};
        if (z.bound) {
            out["bound"] = *z.bound;
            out["exceeds_bound"] = z.exceeds_bound();
            out["saturates_bound"] = z.saturates_bound();
        }
        if (z.exceeds_bound()) throw ShapeViolation("zero count " + std::to_string(z.count) + " exceeds N = " + std::to_string(*z.bound));
        return out;
    }

    std::pair<double, double> window_from_grid() const {
        const auto g = parse_grid(job_.t_grid);
        return {*std::min_element(g.begin(), g.end()), *std::max_element(g.begin(), g.end())};
    }

    json pair_cmd() {
        if (job_.word.empty()) throw ValidationError("--word is required");
        const LoopWord l = parse_word(job_.word);
        const PairingReport rep = pair_with_form(l);
        json hom = homology_class(l);
        json out = {{"word", l.to_string()}, {"homology_class", hom}, {"pairing", to_json(rep)}};
        json chain = json::array();
        LoopWord cur = l;
        try {
            const Twist tw = parse_twist(job_.twist);
            for (int i = 0; i < 4 && !cur.empty(); ++i) {
                cur = var(cur, tw);
                chain.push_back(cur.to_string());
            }
            out["variations"] = chain;
        } catch (const ValidationError& e) {
            out["variations_note"] = e.what();
        }
        return out;
    }

    Job job_;
    fs::path dir_;
};

int fail(int code, const std::string& kind, const std::string& msg) {
    std::cout << json{{"error", {{"kind", kind}, {"message", msg}}}}.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Melnikov functions, Francoise recursion and D4 monodromy experiments"};
    app.require_subcommand(1);
    Job job;
    auto common = [&](CLI::App* s) {
        s->add_option("--ham", job.ham, "eight-loop | double-heteroclinic | global-center | d4");
        s->add_option("--annulus", job.annulus, "interior-right | interior-left | exterior | center");
        s->add_option("--form", job.form, "one-form, e.g. \"y^3 dx + 1/2*x dy\"");
        s->add_option("--form-file", job.form_file, "file holding the one-form");
        s->add_option("--out", job.out, "output root directory");
        s->add_option("--k-max", job.k_max, "largest k tried by the chain");
        s->add_option("--t-grid", job.t_grid, "a:b:n or comma list");
        s->add_flag("--pretty", job.pretty, "indent stdout JSON");
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"decompose", "w = dG + g dH + alpha sigma0 + beta sigma1 + gamma sigma2"},
             {"melnikov", "first nonvanishing M_k with the q_k trace"},
             {"d4", "q1, q2, M3 and the third-order ODE for the triangle"},
             {"sample", "quadrature values of moment integrals as CSV"},
             {"compare", "symbolic versus shooting M_k as CSV"},
             {"zeros", "zero count, brackets and bound check"},
             {"pair", "free-loop word, homology class and contour pairing"}}) {
        auto* s = app.add_subcommand(name, help);
        common(s);
        subs[name] = s;
    }
    subs["d4"]->add_flag("--paper-example", job.worked_example, "use w = -(2 - x + x^2/2) dy");
    subs["sample"]->add_option("--integrand", job.integrand, "I<k>, Istar or form");
    subs["compare"]->add_option("--eps-grid", job.eps_grid, "epsilon values");
    subs["zeros"]->add_option("--samples", job.samples, "grid size of the sign scan");
    subs["pair"]->add_option("--word", job.word, "e.g. \"[g1,g2]\" or \"g1 g2 g3\"");
    subs["pair"]->add_option("--twist", job.twist, "d4-l0 | a3-l0 | a3-l1/4");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "validation", e.what());
    }
    for (const auto& [name, s] : subs)
        if (s->parsed()) job.command = name;
    if (job.command == "d4") job.ham = "d4";
    try {
        return Runner(job).run();
    } catch (const ValidationError& e) {
        return fail(2, "validation", e.what());
    } catch (const ShapeViolation& e) {
        return fail(3, "shape", e.what());
    } catch (const NumericFailure& e) {
        return fail(4, "numeric", e.what());
    } catch (const std::exception& e) {
        return fail(4, "numeric", e.what());
    }
}
