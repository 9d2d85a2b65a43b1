#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <chebdde_examples/examples.hpp>

namespace {

using nlohmann::json;
using namespace chebdde;
using namespace chebdde::examples;

constexpr int kExitSolverFailure = 1;
constexpr int kExitUsage = 2;

std::string number(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

/// JSON cannot hold inf or nan; those become strings.
json json_number(double v) {
    if (std::isfinite(v)) return v;
    return number(v);
}

struct CommonFlags {
    std::string name;
    std::optional<std::size_t> n;
    std::string sizes;
    std::string out;
    std::string format = "json";
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::optional<double> shift;
    std::optional<double> period_guess;
    std::string trajectory;
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    if (text.empty()) return sizes;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        std::size_t v = 0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || v == 0)
            throw CLI::ValidationError("--sizes", "expected a comma list of positive integers");
        sizes.push_back(v);
    }
    return sizes;
}

ExampleSettings settings_from(const CommonFlags& f) {
    ExampleSettings s;
    s.n = f.n;
    s.sizes = parse_sizes(f.sizes);
    s.tol = f.tol;
    s.max_iter = f.max_iter;
    s.shift = f.shift;
    s.period_guess = f.period_guess;
    if (!f.trajectory.empty()) {
        std::ifstream in(f.trajectory);
        if (!in) throw std::runtime_error("cannot open trajectory file " + f.trajectory);
        s.trajectory = read_csv(in);
    }
    return s;
}

json summary(const ExampleSpec& spec, const ExampleOutcome& o) {
    json j;
    j["schema"] = 1;
    j["status"] = "ok";
    j["example"] = spec.name;
    j["title"] = spec.title;
    j["category"] = std::string(to_string(spec.category));
    j["dof"] = o.dof;
    j["breakpoints"] = json::array();
    for (double b : o.breakpoints) j["breakpoints"].push_back(json_number(b));
    j["error"] = o.error ? json_number(*o.error) : json(nullptr);
    j["relative_error"] = o.relative_error ? json_number(*o.relative_error) : json(nullptr);
    j["cond"] = json_number(o.cond);
    if (o.newton) {
        json nr;
        nr["converged"] = o.newton->converged;
        nr["final_residual"] = json_number(o.newton->final_residual_norm);
        nr["final_jacobian_cond"] = json_number(o.newton->final_jacobian_cond);
        nr["clamped"] = o.newton->clamped;
        nr["iterations"] = json::array();
        for (const auto& step : o.newton->iterations)
            nr["iterations"].push_back({{"residual", json_number(step.residual_norm)},
                                        {"update", json_number(step.update_norm)},
                                        {"update_2", json_number(step.update_norm_2)}});
        j["newton"] = nr;
    }
    if (!o.eigenvalues.empty()) {
        j["eigenvalues"] = json::array();
        for (const auto& z : o.eigenvalues)
            j["eigenvalues"].push_back({{"re", json_number(z.real())}, {"im", json_number(z.imag())}});
    }
    if (o.period) j["period"] = json_number(*o.period);
    json extras = json::object();
    for (const auto& [key, value] : o.extras) extras[key] = json_number(value);
    j["extras"] = extras;
    return j;
}

void write_solution_csv(std::ostream& os, const ExampleOutcome& o, bool eigenvectors) {
    os << "panel,t";
    for (std::size_t c = 0; c < o.y.size(); ++c) os << (eigenvectors ? ",v" : ",y") << (c + 1);
    os << '\n';
    for (std::size_t i = 0; i < o.t.size(); ++i) {
        os << o.panel[i] << ',' << number(o.t[i]);
        for (const auto& comp : o.y) os << ',' << number(comp[i]);
        os << '\n';
    }
}

json error_record(const std::string& name, const std::string& message) {
    return {{"schema", 1}, {"status", "error"}, {"example", name}, {"error", message}};
}

void emit(const CommonFlags& f, const json& j, const ExampleOutcome* o, bool eigenvectors) {
    if (!f.out.empty()) {
        std::ofstream js(f.out + ".json");
        js << j.dump(2) << '\n';
        if (o) {
            std::ofstream csv(f.out + ".csv");
            write_solution_csv(csv, *o, eigenvectors);
        }
        if (!js) throw std::runtime_error("cannot write " + f.out + ".json");
        return;
    }
    if (f.format == "csv" && o) {
        write_solution_csv(std::cout, *o, eigenvectors);
    } else {
        std::cout << j.dump(2) << '\n';
    }
}

const ExampleSpec* lookup(const std::string& name) {
    const ExampleSpec* spec = find_example(name);
    if (!spec) std::cerr << "chebdde: unknown example '" << name << "' (see `chebdde list`)\n";
    return spec;
}

int run_solve(const CommonFlags& f, std::optional<Category> required) {
    const ExampleSpec* spec = lookup(f.name);
    if (!spec) return kExitUsage;
    if (required && spec->category != *required) {
        std::cerr << "chebdde: example '" << f.name << "' has category " << to_string(spec->category) << ", expected "
                  << to_string(*required) << '\n';
        return kExitUsage;
    }
    const bool evp = spec->category == Category::evp;
    ExampleSettings s;
    try {
        s = settings_from(f);
    } catch (const std::exception& e) {
        std::cerr << "chebdde: " << e.what() << '\n';
        return kExitUsage;
    }
    try {
        const ExampleOutcome o = spec->run(s);
        emit(f, summary(*spec, o), &o, evp);
        return 0;
    } catch (const std::exception& e) {
        const json j = error_record(spec->name, e.what());
        try {
            emit(f, j, nullptr, evp);
        } catch (const std::exception&) {
            std::cout << j.dump(2) << '\n';
        }
        std::cerr << "chebdde: " << e.what() << '\n';
        return kExitSolverFailure;
    }
}

int run_converge(const CommonFlags& f, std::size_t n_min, std::size_t n_max, std::size_t step) {
    const ExampleSpec* spec = lookup(f.name);
    if (!spec) return kExitUsage;
    try {
        const auto records = converge(*spec, n_min, n_max, step, settings_from(f));
        std::ostringstream csv;
        csv << "n,error,cond\n";
        for (const auto& r : records) csv << r.n << ',' << number(r.error) << ',' << number(r.cond) << '\n';
        if (f.out.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream file(f.out);
            file << csv.str();
            if (!file) throw std::runtime_error("cannot write " + f.out);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cout << error_record(spec->name, e.what()).dump(2) << '\n';
        std::cerr << "chebdde: " << e.what() << '\n';
        return kExitSolverFailure;
    }
}

void add_common(CLI::App* cmd, CommonFlags& f, bool with_format) {
    cmd->add_option("name", f.name, "Registered example name")->required();
    cmd->add_option("--n", f.n, "Grid size (per panel for multidomain examples)")->check(CLI::PositiveNumber);
    cmd->add_option("--sizes", f.sizes, "Comma-separated per-panel sizes, e.g. 10,11,12,13");
    cmd->add_option("--tol", f.tol, "Newton update tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", f.max_iter, "Newton iteration limit")->check(CLI::PositiveNumber);
    cmd->add_option("--shift", f.shift, "Eigenvalue shift");
    cmd->add_option("--period-guess", f.period_guess, "Initial period for limit cycles")->check(CLI::PositiveNumber);
    cmd->add_option("--trajectory", f.trajectory, "CSV trajectory (t,y1,...) used as the limit-cycle initial guess");
    if (with_format) {
        cmd->add_option("--out", f.out, "Output prefix: writes <prefix>.csv and <prefix>.json");
        cmd->add_option("--format", f.format, "Output to stdout when --out is absent")
            ->check(CLI::IsMember({"csv", "json"}));
    } else {
        cmd->add_option("--out", f.out, "Convergence CSV path (stdout when absent)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral collocation solver for delay and functional differential equations"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::size_t n_min = 0;
    std::size_t n_max = 0;
    std::size_t step = 1;

    auto* solve = app.add_subcommand("solve", "Solve a registered example");
    add_common(solve, flags, true);
    auto* eig = app.add_subcommand("eig", "Solve a registered eigenvalue problem");
    add_common(eig, flags, true);
    auto* cycle = app.add_subcommand("cycle", "Compute a registered limit cycle");
    add_common(cycle, flags, true);
    auto* conv = app.add_subcommand("converge", "Convergence study over grid sizes");
    add_common(conv, flags, false);
    conv->add_option("--n-min", n_min, "Smallest size")->required();
    conv->add_option("--n-max", n_max, "Largest size")->required();
    conv->add_option("--step", step, "Size increment")->check(CLI::PositiveNumber);
    auto* list = app.add_subcommand("list", "List registered examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (list->parsed()) {
        for (const auto& spec : registry())
            std::cout << spec.name << '\t' << to_string(spec.category) << '\t' << spec.default_n << '\t' << spec.title
                      << '\n';
        return 0;
    }
    if (solve->parsed()) return run_solve(flags, std::nullopt);
    if (eig->parsed()) return run_solve(flags, Category::evp);
    if (cycle->parsed()) return run_solve(flags, Category::periodic);
    return run_converge(flags, n_min, n_max, step);
}
