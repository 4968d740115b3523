#include "cli.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gielab/acceptance.hpp"
#include "gielab/algebra.hpp"
#include "gielab/chsh.hpp"
#include "gielab/dressing.hpp"
#include "gielab/entwit.hpp"
#include "gielab/errors.hpp"
#include "gielab/nosignal.hpp"
#include "gielab/protocol.hpp"
#include "gielab/qmat.hpp"
#include "gielab/rng.hpp"

namespace gielab::cli {

namespace {

using nlohmann::json;

constexpr const char* kSchemaVersion = "gielab-report-v1";

// ---------------------------------------------------------------------------
// strict config schema

enum class FieldType { Number, PositiveNumber, Integer, PositiveInteger, String, NumberArray,
                       IntArray, StringArray, Unsigned };

struct FieldSpec {
    FieldType type;
};

using Schema = std::map<std::string, FieldSpec>;

bool is_number(const json& v) { return v.is_number_float() || v.is_number_integer(); }

void validate_field(const json& v, const FieldSpec& spec, const std::string& path) {
    switch (spec.type) {
        case FieldType::Number:
            if (!is_number(v)) throw ConfigError(path + ": expected a number");
            break;
        case FieldType::PositiveNumber:
            if (!is_number(v) || !(v.get<double>() > 0.0)) {
                throw ConfigError(path + ": expected a positive number");
            }
            break;
        case FieldType::Integer:
            if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
            break;
        case FieldType::PositiveInteger:
            if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
                throw ConfigError(path + ": expected a positive integer");
            }
            break;
        case FieldType::Unsigned:
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
                throw ConfigError(path + ": expected a nonnegative integer");
            }
            break;
        case FieldType::String:
            if (!v.is_string()) throw ConfigError(path + ": expected a string");
            break;
        case FieldType::NumberArray:
            if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a nonempty array");
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!is_number(v[i])) {
                    throw ConfigError(path + "[" + std::to_string(i) + "]: expected a number");
                }
            }
            break;
        case FieldType::IntArray:
            if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a nonempty array");
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!v[i].is_number_integer()) {
                    throw ConfigError(path + "[" + std::to_string(i) + "]: expected an integer");
                }
            }
            break;
        case FieldType::StringArray:
            if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a nonempty array");
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!v[i].is_string()) {
                    throw ConfigError(path + "[" + std::to_string(i) + "]: expected a string");
                }
            }
            break;
    }
}

void validate_object(const json& obj, const Schema& schema, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        const auto it = schema.find(key);
        if (it == schema.end()) throw ConfigError(path + "." + key + ": unknown field");
        validate_field(value, it->second, path + "." + key);
    }
}

double number_or(const json& obj, const char* key, double fallback) {
    return obj.contains(key) ? obj[key].get<double>() : fallback;
}

std::int64_t int_or(const json& obj, const char* key, std::int64_t fallback) {
    return obj.contains(key) ? obj[key].get<std::int64_t>() : fallback;
}

std::string string_or(const json& obj, const char* key, const std::string& fallback) {
    return obj.contains(key) ? obj[key].get<std::string>() : fallback;
}

// ---------------------------------------------------------------------------
// report assembly

std::string fnum(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Report {
    std::string command;
    json config_echo;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    std::string render(const std::string& format) const {
        if (format == "json") {
            json out;
            out["schema"] = kSchemaVersion;
            out["command"] = command;
            out["config"] = config_echo;
            json jrows = json::array();
            for (const auto& row : rows) {
                json r = json::object();
                for (std::size_t c = 0; c < columns.size(); ++c) r[columns[c]] = row[c];
                jrows.push_back(std::move(r));
            }
            out["rows"] = std::move(jrows);
            return out.dump(2) + "\n";
        }
        std::ostringstream os;
        os << "# schema: " << kSchemaVersion << "\n";
        os << "# command: " << command << "\n";
        os << "# config: " << config_echo.dump() << "\n";
        for (std::size_t c = 0; c < columns.size(); ++c) {
            os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
        }
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                const json& v = row[c];
                if (v.is_number_float()) os << fnum(v.get<double>());
                else if (v.is_boolean()) os << (v.get<bool>() ? "true" : "false");
                else if (v.is_string()) os << v.get<std::string>();
                else os << v.dump();
                os << (c + 1 < row.size() ? "," : "\n");
            }
        }
        return os.str();
    }
};

struct RunContext {
    json params;            // validated per-command parameter object
    std::uint64_t seed = 0;
    std::string format = "csv";
    unsigned jobs = 1;
    std::optional<std::string> out;

    json echo(const std::string& command) const {
        json cfg;
        cfg["command"] = command;
        cfg["format"] = format;
        cfg["jobs"] = jobs;
        cfg["params"] = params.is_null() ? json::object() : params;
        cfg["seed"] = seed;
        return cfg;
    }
};

void emit(const Report& report, const RunContext& ctx) {
    const std::string text = report.render(ctx.format);
    if (ctx.out) {
        std::ofstream f(*ctx.out, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file '" + *ctx.out + "'");
        f << text;
    } else {
        std::cout << text;
    }
}

// ---------------------------------------------------------------------------
// command implementations

protocol::BmvParams bmv_from_params(const json& p) {
    protocol::BmvParams b;
    b.m1 = number_or(p, "m1", 1e-14);
    b.m2 = number_or(p, "m2", 1e-14);
    b.d = number_or(p, "d", 2e-4);
    b.dx = number_or(p, "dx", 1e-4);
    b.tau = number_or(p, "tau", 1.0);
    return b;
}

const Schema kBmvSchema = {
    {"m1", {FieldType::PositiveNumber}}, {"m2", {FieldType::PositiveNumber}},
    {"d", {FieldType::PositiveNumber}},  {"dx", {FieldType::PositiveNumber}},
    {"tau", {FieldType::PositiveNumber}},
};

int cmd_phases(const RunContext& ctx) {
    validate_object(ctx.params, kBmvSchema, "params");
    const auto ph = protocol::compute_phases(bmv_from_params(ctx.params));
    Report rep;
    rep.command = "phases";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"phi", "phi_lr", "phi_rl", "dphi_lr", "dphi_rl", "entangling_sum"};
    rep.rows.push_back(
        {ph.phi, ph.phi_lr, ph.phi_rl, ph.dphi_lr(), ph.dphi_rl(), ph.entangling_sum()});
    emit(rep, ctx);
    return 0;
}

int cmd_bipartite(const RunContext& ctx) {
    Schema schema = kBmvSchema;
    schema["dphi_lr"] = {FieldType::Number};
    schema["dphi_rl"] = {FieldType::Number};
    validate_object(ctx.params, schema, "params");

    protocol::PathPhases ph;
    if (ctx.params.contains("dphi_lr") || ctx.params.contains("dphi_rl")) {
        for (const char* key : {"m1", "m2", "d", "dx", "tau"}) {
            if (ctx.params.contains(key)) {
                throw ConfigError(std::string("params.") + key +
                                  ": cannot mix raw relative phases with protocol parameters");
            }
        }
        ph.phi = 0.0;
        ph.phi_lr = number_or(ctx.params, "dphi_lr", 0.0);
        ph.phi_rl = number_or(ctx.params, "dphi_rl", 0.0);
    } else {
        ph = protocol::compute_phases(bmv_from_params(ctx.params));
    }

    const auto ket = protocol::bipartite_state(ph);
    const double neg = entwit::negativity(density(ket), entwit::Bipartition::two_qubits());
    const bool by_phase = entwit::phase_entanglement_criterion(ph, 1e-9);

    Report rep;
    rep.command = "bipartite";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"component", "re", "im"};
    const char* labels[] = {"LL", "LR", "RL", "RR"};
    for (int i = 0; i < 4; ++i) {
        rep.rows.push_back({labels[i], ket[i].real(), ket[i].imag()});
    }
    rep.columns = {"field", "value"};
    rep.rows.clear();
    for (int i = 0; i < 4; ++i) {
        rep.rows.push_back({std::string("amp_") + labels[i] + "_re", ket[i].real()});
        rep.rows.push_back({std::string("amp_") + labels[i] + "_im", ket[i].imag()});
    }
    rep.rows.push_back({"entangling_sum", ph.entangling_sum()});
    rep.rows.push_back({"negativity", neg});
    rep.rows.push_back({"entangled_by_negativity", neg > 1e-12});
    rep.rows.push_back({"entangled_by_phase", by_phase});
    emit(rep, ctx);
    return 0;
}

int cmd_tripartite(const RunContext& ctx) {
    Schema schema = kBmvSchema;
    schema["mediator_dim"] = {FieldType::PositiveInteger};
    schema["mediator"] = {FieldType::String};
    schema["ordering"] = {FieldType::String};
    validate_object(ctx.params, schema, "params");

    const auto p = bmv_from_params(ctx.params);
    const auto ph = protocol::compute_phases(p);
    const std::size_t dim = static_cast<std::size_t>(int_or(ctx.params, "mediator_dim", 2));
    const std::string kind = string_or(ctx.params, "mediator", "diagonal");
    const std::string ordering_name = string_or(ctx.params, "ordering", "uv");
    if (ordering_name != "uv" && ordering_name != "vu") {
        throw ConfigError("params.ordering: expected 'uv' or 'vu'");
    }
    const auto ordering = ordering_name == "uv" ? protocol::MediatorOrdering::UV
                                                : protocol::MediatorOrdering::VU;

    Rng rng(mix_seed(ctx.seed, "cli.tripartite"));
    protocol::MediatorSpec ms = protocol::MediatorSpec::trivial(dim);
    if (kind == "identity") {
        // keep trivial controls
    } else if (kind == "diagonal") {
        auto diag_phase = [&](double theta) {
            std::vector<Complex> d(dim, Complex(1.0));
            for (std::size_t i = 1; i < dim; ++i) d[i] = std::polar(1.0, theta);
            return ComplexMatrix::diagonal(d);
        };
        ms.u_l = diag_phase(rng.uniform(0.0, 2.0 * kPi));
        ms.u_r = diag_phase(rng.uniform(0.0, 2.0 * kPi));
        ms.v_l = diag_phase(rng.uniform(0.0, 2.0 * kPi));
        ms.v_r = diag_phase(rng.uniform(0.0, 2.0 * kPi));
    } else if (kind == "random") {
        ms.u_l = random_unitary(rng, dim);
        ms.u_r = random_unitary(rng, dim);
        ms.v_l = random_unitary(rng, dim);
        ms.v_r = random_unitary(rng, dim);
    } else {
        throw ConfigError("params.mediator: expected 'identity', 'diagonal' or 'random'");
    }

    const auto ket =
        protocol::tripartite_evolve(ms, protocol::BranchPhases::from_path_phases(ph), ordering);
    const ComplexMatrix reduced = protocol::matter_reduced_state(ket, dim);
    const ComplexMatrix target = density(protocol::bipartite_state(ph));
    const double matter_neg = entwit::negativity(reduced, entwit::Bipartition::two_qubits());
    const double pure_neg = entwit::negativity(target, entwit::Bipartition::two_qubits());

    Report rep;
    rep.command = "tripartite";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"field", "value"};
    rep.rows.push_back({"mediator", kind});
    rep.rows.push_back({"mediator_dim", static_cast<std::int64_t>(dim)});
    rep.rows.push_back({"matter_negativity", matter_neg});
    rep.rows.push_back({"pure_phase_negativity", pure_neg});
    rep.rows.push_back({"distance_to_bipartite", (reduced - target).frobenius_norm()});
    emit(rep, ctx);
    return 0;
}

int cmd_modes(const RunContext& ctx) {
    Schema schema = kBmvSchema;
    schema["separation"] = {FieldType::Number};
    schema["box_factors"] = {FieldType::NumberArray};
    schema["n_max"] = {FieldType::IntArray};
    schema["smoothing_factor"] = {FieldType::PositiveNumber};
    validate_object(ctx.params, schema, "params");

    const auto p = bmv_from_params(ctx.params);
    const double separation = number_or(ctx.params, "separation", p.d);
    const double smoothing =
        number_or(ctx.params, "smoothing_factor", 1.0 / 3.0) * std::abs(separation);
    std::vector<double> factors = {60.0, 80.0, 120.0};
    std::vector<std::int64_t> cutoffs = {120, 160, 240};
    if (ctx.params.contains("box_factors")) {
        factors = ctx.params["box_factors"].get<std::vector<double>>();
    }
    if (ctx.params.contains("n_max")) {
        cutoffs = ctx.params["n_max"].get<std::vector<std::int64_t>>();
    }
    if (factors.size() != cutoffs.size()) {
        throw ConfigError("params.n_max: must have the same length as params.box_factors");
    }

    const double newtonian = -p.constants.G * p.m1 * p.m2 / std::abs(separation);
    Report rep;
    rep.command = "modes";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"box_length_m", "n_max", "mode_count", "potential_j", "newtonian_j",
                   "rel_error", "leakage_alpha_max"};
    for (std::size_t g = 0; g < factors.size(); ++g) {
        protocol::ModeGrid grid(factors[g] * std::abs(separation), static_cast<int>(cutoffs[g]),
                                p.constants);
        const double v = protocol::mode_sum_potential(grid, p, separation, smoothing);
        const auto kmin = grid.mode(1, 0, 0);
        const double alpha = protocol::coupling(grid, std::max(p.m1, p.m2), kmin) / kmin.omega;
        rep.rows.push_back({grid.box_length(), cutoffs[g],
                            static_cast<std::int64_t>(grid.mode_count()), v, newtonian,
                            std::abs(v / newtonian - 1.0), alpha});
    }
    emit(rep, ctx);
    return 0;
}

int cmd_witness(const RunContext& ctx) {
    const Schema schema = {
        {"grid_points", {FieldType::PositiveInteger}},
        {"tol", {FieldType::PositiveNumber}},
    };
    validate_object(ctx.params, schema, "params");
    const std::size_t n = static_cast<std::size_t>(int_or(ctx.params, "grid_points", 17));
    const double tol = number_or(ctx.params, "tol", 1e-9);

    const entwit::Bipartition cut = entwit::Bipartition::two_qubits();
    Report rep;
    rep.command = "witness";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"dphi_lr", "dphi_rl", "entangling_sum", "negativity", "entangled"};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            protocol::PathPhases ph;
            ph.phi = 0.0;
            ph.phi_lr = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
            ph.phi_rl = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
            const double neg =
                entwit::negativity(density(protocol::bipartite_state(ph)), cut);
            rep.rows.push_back({ph.dphi_lr(), ph.dphi_rl(), ph.entangling_sum(), neg,
                                entwit::phase_entanglement_criterion(ph, tol)});
        }
    }
    emit(rep, ctx);
    return 0;
}

int cmd_chsh(const RunContext& ctx) {
    const Schema schema = {
        {"dim", {FieldType::PositiveInteger}},
        {"restarts", {FieldType::Unsigned}},
        {"target", {FieldType::String}},
        {"max_rounds", {FieldType::PositiveInteger}},
    };
    validate_object(ctx.params, schema, "params");
    const std::size_t dim = static_cast<std::size_t>(int_or(ctx.params, "dim", 2));
    const std::string target_name = string_or(ctx.params, "target", "tensor");
    if (target_name != "tensor" && target_name != "sym") {
        throw ConfigError("params.target: expected 'tensor' or 'sym'");
    }
    chsh::SeesawOptions opts;
    opts.restarts = static_cast<int>(int_or(ctx.params, "restarts", 20));
    opts.max_rounds = static_cast<int>(int_or(ctx.params, "max_rounds", 500));
    const auto target = target_name == "tensor" ? chsh::SeesawTarget::TensorChsh
                                                : chsh::SeesawTarget::SymmetrizedChsh;

    const auto result = chsh::seesaw_maximize(dim, ctx.seed, opts, target, ctx.jobs);
    const double residual = chsh::sos_residual(result.tuple);

    Report rep;
    rep.command = "chsh";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"seed", "dim", "target", "value", "residual", "converged", "rounds"};
    rep.rows.push_back({ctx.seed, static_cast<std::int64_t>(dim), target_name, result.value,
                        residual, result.converged, static_cast<std::int64_t>(result.rounds)});
    emit(rep, ctx);
    return 0;
}

int cmd_sos_check(const RunContext& ctx) {
    const Schema schema = {
        {"count", {FieldType::PositiveInteger}},
        {"dims", {FieldType::IntArray}},
    };
    validate_object(ctx.params, schema, "params");
    const std::size_t count = static_cast<std::size_t>(int_or(ctx.params, "count", 1000));
    std::vector<std::int64_t> dims = {2, 3, 4, 6, 8};
    if (ctx.params.contains("dims")) dims = ctx.params["dims"].get<std::vector<std::int64_t>>();

    Report rep;
    rep.command = "sos-check";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"seed", "dim", "count", "max_residual", "bound_ok"};
    const std::size_t per_dim = (count + dims.size() - 1) / dims.size();
    for (std::int64_t d : dims) {
        if (d < 1) throw ConfigError("params.dims: dimensions must be positive");
        double worst = 0.0;
        for (std::size_t i = 0; i < per_dim; ++i) {
            Rng rng(mix_seed(ctx.seed, "cli.sos", static_cast<std::uint64_t>(d) * 1000003 + i));
            chsh::ChshTuple t;
            t.a1 = random_hermitian(rng, static_cast<std::size_t>(d));
            t.a2 = random_hermitian(rng, static_cast<std::size_t>(d));
            t.b1 = random_hermitian(rng, static_cast<std::size_t>(d));
            t.b2 = random_hermitian(rng, static_cast<std::size_t>(d));
            worst = std::max(worst, chsh::sos_residual(t));
        }
        rep.rows.push_back({ctx.seed, d, static_cast<std::int64_t>(per_dim), worst,
                            worst <= 1e-9});
    }
    emit(rep, ctx);
    return 0;
}

int cmd_tsirelson_scan(const RunContext& ctx) {
    const Schema schema = {
        {"count", {FieldType::PositiveInteger}},
        {"dims", {FieldType::IntArray}},
    };
    validate_object(ctx.params, schema, "params");
    const std::size_t count = static_cast<std::size_t>(int_or(ctx.params, "count", 1000));
    std::vector<std::int64_t> dims = {2, 4, 8};
    if (ctx.params.contains("dims")) dims = ctx.params["dims"].get<std::vector<std::int64_t>>();
    const double bound = 2.0 * std::sqrt(2.0);

    Report rep;
    rep.command = "tsirelson-scan";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"seed", "dim", "count", "max_norm", "bound", "bound_ok"};
    const std::size_t per_dim = (count + dims.size() - 1) / dims.size();
    for (std::int64_t d : dims) {
        if (d < 2) throw ConfigError("params.dims: dimensions must be at least 2");
        double worst = 0.0;
        for (std::size_t i = 0; i < per_dim; ++i) {
            Rng rng(mix_seed(ctx.seed, "cli.tsirelson",
                             static_cast<std::uint64_t>(d) * 1000003 + i));
            chsh::ChshTuple t;
            t.involution = true;
            t.a1 = random_involution(rng, static_cast<std::size_t>(d));
            t.a2 = random_involution(rng, static_cast<std::size_t>(d));
            t.b1 = random_involution(rng, static_cast<std::size_t>(d));
            t.b2 = random_involution(rng, static_cast<std::size_t>(d));
            worst = std::max(worst, op_norm(chsh::symmetrized_chsh(t), 1e-8));
        }
        rep.rows.push_back({ctx.seed, d, static_cast<std::int64_t>(per_dim), worst, bound,
                            worst <= bound + 1e-9});
    }
    emit(rep, ctx);
    return 0;
}

int cmd_algebra(const RunContext& ctx) {
    const Schema schema = {
        {"example", {FieldType::String}},
        {"samples", {FieldType::PositiveInteger}},
    };
    validate_object(ctx.params, schema, "params");
    const std::string example = string_or(ctx.params, "example", "tensor-split");
    const std::size_t samples = static_cast<std::size_t>(int_or(ctx.params, "samples", 200));

    algebra::AlgebraSpec a1, a2;
    if (example == "tensor-split") {
        a1 = algebra::left_factor_algebra(2, 2);
        a2 = algebra::right_factor_algebra(2, 2);
    } else if (example == "qubit-xz") {
        a1 = algebra::generated_algebra(
            algebra::AlgebraSpec::from_generators(2, {algebra::pauli_x()}));
        a2 = algebra::generated_algebra(
            algebra::AlgebraSpec::from_generators(2, {algebra::pauli_z()}));
    } else if (example == "diagonal") {
        const Complex d1[] = {1.0, -1.0};
        a1 = algebra::generated_algebra(
            algebra::AlgebraSpec::from_generators(2, {ComplexMatrix::diagonal(d1)}));
        a2 = algebra::commutant(a1);
    } else if (example == "irreducible") {
        Rng rng(mix_seed(ctx.seed, "cli.algebra"));
        a1 = algebra::generated_algebra(algebra::AlgebraSpec::from_generators(
            4, {random_hermitian(rng, 4), random_hermitian(rng, 4)}));
        a2 = algebra::commutant(a1);
    } else if (example == "entangler-cnot" || example == "entangler-swap" ||
               example == "entangler-random") {
        const auto kind = example == "entangler-cnot"   ? nosignal::Entangler::Cnot
                          : example == "entangler-swap" ? nosignal::Entangler::Swap
                                                        : nosignal::Entangler::Random;
        std::tie(a1, a2) = nosignal::entangler_pair(kind, ctx.seed);
    } else {
        throw ConfigError("params.example: unknown algebra example '" + example + "'");
    }

    if (!a1.closed_basis) a1 = algebra::generated_algebra(a1);
    if (!a2.closed_basis) a2 = algebra::generated_algebra(a2);
    const auto comm = algebra::commute_check(a1, a2);
    const auto center1 = algebra::center_and_factor(a1);
    const auto center2 = algebra::center_and_factor(a2);
    const auto commutant1 = algebra::commutant(a1);
    const auto triple = algebra::commutant(algebra::commutant(commutant1));
    const double idem_angle =
        algebra::max_principal_angle_sin(commutant1.basis(), triple.basis());

    // uncorrelated-state factorization on a product state and on a random one
    Rng rng(mix_seed(ctx.seed, "cli.algebra.states"));
    const ComplexMatrix rho_prod = [&] {
        if (example == "tensor-split") {
            return kron(random_density(rng, 2), random_density(rng, 2));
        }
        return random_density(rng, a1.ambient_dim, 1);
    }();
    const auto unc = algebra::uncorrelated_check(rho_prod, a1, a2, samples, ctx.seed);

    Report rep;
    rep.command = "algebra";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"field", "value"};
    rep.rows.push_back({"example", example});
    rep.rows.push_back({"ambient_dim", static_cast<std::int64_t>(a1.ambient_dim)});
    rep.rows.push_back({"a1_dim", static_cast<std::int64_t>(a1.algebra_dim())});
    rep.rows.push_back({"a2_dim", static_cast<std::int64_t>(a2.algebra_dim())});
    rep.rows.push_back({"a1_commutant_dim", static_cast<std::int64_t>(commutant1.algebra_dim())});
    rep.rows.push_back({"a1_center_dim", static_cast<std::int64_t>(center1.center_basis.size())});
    rep.rows.push_back({"a1_is_factor", center1.is_factor});
    rep.rows.push_back({"a2_center_dim", static_cast<std::int64_t>(center2.center_basis.size())});
    rep.rows.push_back({"a2_is_factor", center2.is_factor});
    rep.rows.push_back({"commute", comm.commute});
    rep.rows.push_back({"commutator_residual", comm.max_residual});
    rep.rows.push_back({"double_commutant_angle", idem_angle});
    rep.rows.push_back({"uncorrelated_state_found", unc.uncorrelated});
    rep.rows.push_back({"uncorrelated_worst_deviation", unc.worst_deviation});
    emit(rep, ctx);
    return 0;
}

int cmd_nosignal(const RunContext& ctx) {
    const Schema schema = {
        {"case", {FieldType::String}},
        {"entangler", {FieldType::String}},
        {"budget", {FieldType::PositiveInteger}},
        {"samples", {FieldType::PositiveInteger}},
    };
    validate_object(ctx.params, schema, "params");
    const std::string which = string_or(ctx.params, "case", "qubit-xz");
    const std::size_t budget = static_cast<std::size_t>(int_or(ctx.params, "budget", 200));
    const std::size_t samples = static_cast<std::size_t>(int_or(ctx.params, "samples", 1000));

    Report rep;
    rep.command = "nosignal";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"field", "value"};
    rep.rows.push_back({"case", which});

    if (which == "commuting") {
        const auto a1 = algebra::left_factor_algebra(2, 2);
        const auto a2 = algebra::right_factor_algebra(2, 2);
        const auto mac = nosignal::macrocausality_equiv_test(a1, a2, budget, ctx.seed);
        rep.rows.push_back({"verdict", nosignal::to_string(mac.verdict)});
        rep.rows.push_back({"commutator_residual", mac.commutator_residual});
        rep.rows.push_back({"worst_deviation", mac.worst_deviation});
        rep.rows.push_back({"trials", static_cast<std::int64_t>(mac.trials_used)});
    } else if (which == "qubit-xz") {
        const auto a1 = algebra::generated_algebra(
            algebra::AlgebraSpec::from_generators(2, {algebra::pauli_x()}));
        const auto a2 = algebra::generated_algebra(
            algebra::AlgebraSpec::from_generators(2, {algebra::pauli_z()}));
        const auto mac = nosignal::macrocausality_equiv_test(a1, a2, budget, ctx.seed);
        rep.rows.push_back({"verdict", nosignal::to_string(mac.verdict)});
        rep.rows.push_back({"commutator_residual", mac.commutator_residual});
        rep.rows.push_back(
            {"witness_deviation", mac.witness ? mac.witness->deviation : 0.0});
        rep.rows.push_back({"trials", static_cast<std::int64_t>(mac.trials_used)});
    } else if (which == "entangler") {
        const std::string ent = string_or(ctx.params, "entangler", "cnot");
        nosignal::Entangler kind;
        if (ent == "cnot") kind = nosignal::Entangler::Cnot;
        else if (ent == "swap") kind = nosignal::Entangler::Swap;
        else if (ent == "random") kind = nosignal::Entangler::Random;
        else if (ent == "identity") kind = nosignal::Entangler::Identity;
        else throw ConfigError("params.entangler: expected cnot, swap, random or identity");

        const auto exrep = nosignal::restricted_example(kind, ctx.seed, samples);
        auto [a1, a2] = nosignal::entangler_pair(kind, ctx.seed);
        const auto mac = nosignal::macrocausality_equiv_test(a1, a2, budget, ctx.seed);
        rep.rows.push_back({"entangler", nosignal::to_string(kind)});
        rep.rows.push_back({"commutator_residual", exrep.commutator_residual});
        rep.rows.push_back({"noncommuting", exrep.noncommuting});
        rep.rows.push_back({"degenerate_commuting_case", exrep.degenerate_commuting_case});
        rep.rows.push_back({"restricted_worst_deviation", exrep.restricted_worst_deviation});
        rep.rows.push_back({"restricted_no_signalling", exrep.restricted_no_signalling});
        rep.rows.push_back({"unrestricted_verdict", nosignal::to_string(mac.verdict)});
        rep.rows.push_back(
            {"unrestricted_witness_deviation", mac.witness ? mac.witness->deviation : 0.0});
        rep.rows.push_back({"samples", static_cast<std::int64_t>(exrep.samples)});
    } else {
        throw ConfigError("params.case: expected 'commuting', 'qubit-xz' or 'entangler'");
    }
    emit(rep, ctx);
    return 0;
}

int cmd_dressing(const RunContext& ctx) {
    const Schema schema = {
        {"masses", {FieldType::NumberArray}},
        {"lengths", {FieldType::NumberArray}},
        {"taus", {FieldType::NumberArray}},
        {"modes", {FieldType::StringArray}},
    };
    validate_object(ctx.params, schema, "params");

    dressing::SweepGrid grid;
    grid.masses = ctx.params.contains("masses")
                      ? ctx.params["masses"].get<std::vector<double>>()
                      : std::vector<double>{1e-14};
    grid.lengths = ctx.params.contains("lengths")
                       ? ctx.params["lengths"].get<std::vector<double>>()
                       : std::vector<double>{1e-6};
    grid.taus = ctx.params.contains("taus") ? ctx.params["taus"].get<std::vector<double>>()
                                            : std::vector<double>{1.0};
    if (ctx.params.contains("modes")) {
        for (const auto& name : ctx.params["modes"]) {
            grid.modes.push_back(dressing::freq_mode_from_string(name.get<std::string>()));
        }
    } else {
        grid.modes = {dressing::FreqMode::RestEnergy, dressing::FreqMode::Kinetic,
                      dressing::FreqMode::Protocol};
    }

    const auto rows = dressing::sweep(grid);
    Report rep;
    rep.command = "dressing";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"m_kg", "L_m", "tau_s", "freq_mode", "ratio", "freq_hz", "rate_hz", "epsilon"};
    for (const auto& r : rows) {
        rep.rows.push_back(
            {r.m, r.L, r.tau, dressing::to_string(r.mode), r.ratio, r.freq, r.rate, r.eps});
    }
    emit(rep, ctx);
    return 0;
}

int cmd_suite(const RunContext& ctx) {
    validate_object(ctx.params, {}, "params");
    const auto results = acceptance::run_all(ctx.seed, ctx.jobs);

    // human summary with timings goes to stderr; the report itself carries
    // only deterministic fields
    for (const auto& r : results) {
        std::fprintf(stderr, "[%s] %2d %-34s %6.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.id,
                     r.name.c_str(), r.seconds, r.detail.c_str());
    }

    Report rep;
    rep.command = "suite";
    rep.config_echo = ctx.echo(rep.command);
    rep.columns = {"id", "name", "passed", "detail"};
    bool all_ok = true;
    for (const auto& r : results) {
        rep.rows.push_back({r.id, r.name, r.passed, r.detail});
        all_ok = all_ok && r.passed;
    }
    emit(rep, ctx);
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    bool out_set = false;
    std::string format;
    bool format_set = false;
    unsigned jobs = 0;
    bool jobs_set = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON run configuration");
    cmd->add_option("--seed", flags.seed, "master seed (default 0)")
        ->each([&](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--out", flags.out, "report output path (default stdout)")
        ->each([&](const std::string&) { flags.out_set = true; });
    cmd->add_option("--format", flags.format, "report format: csv or json")
        ->each([&](const std::string&) { flags.format_set = true; });
    cmd->add_option("--jobs", flags.jobs, "worker threads for sweeps/scans")
        ->each([&](const std::string&) { flags.jobs_set = true; });
}

RunContext make_context(const std::string& command, const CommonFlags& flags) {
    RunContext ctx;
    ctx.params = json::object();

    if (!flags.config_path.empty()) {
        std::ifstream f(flags.config_path);
        if (!f) throw ConfigError("cannot open config file '" + flags.config_path + "'");
        json cfg;
        try {
            cfg = json::parse(f);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config: invalid JSON: ") + e.what());
        }
        const Schema top = {
            {"command", {FieldType::String}}, {"params", {FieldType::String}},
            {"seed", {FieldType::Unsigned}},  {"out", {FieldType::String}},
            {"format", {FieldType::String}},  {"jobs", {FieldType::PositiveInteger}},
        };
        if (!cfg.is_object()) throw ConfigError("config: expected a JSON object");
        for (const auto& [key, value] : cfg.items()) {
            if (top.find(key) == top.end()) throw ConfigError("config." + key + ": unknown field");
            if (key == "params") {
                if (!value.is_object()) throw ConfigError("config.params: expected an object");
            } else {
                validate_field(value, top.at(key), "config." + key);
            }
        }
        if (cfg.contains("command") && cfg["command"].get<std::string>() != command) {
            throw ConfigError("config.command: '" + cfg["command"].get<std::string>() +
                              "' does not match subcommand '" + command + "'");
        }
        if (cfg.contains("params")) ctx.params = cfg["params"];
        if (cfg.contains("seed")) ctx.seed = cfg["seed"].get<std::uint64_t>();
        if (cfg.contains("out")) ctx.out = cfg["out"].get<std::string>();
        if (cfg.contains("format")) ctx.format = cfg["format"].get<std::string>();
        if (cfg.contains("jobs")) ctx.jobs = cfg["jobs"].get<unsigned>();
    }

    if (flags.seed_set) ctx.seed = flags.seed;
    if (flags.out_set) ctx.out = flags.out;
    if (flags.format_set) ctx.format = flags.format;
    if (flags.jobs_set) ctx.jobs = flags.jobs;
    if (ctx.jobs == 0) ctx.jobs = 1;
    if (ctx.format != "csv" && ctx.format != "json") {
        throw ConfigError("format: expected 'csv' or 'json', got '" + ctx.format + "'");
    }
    return ctx;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"numerical laboratory for mediated-entanglement protocols, "
                 "noncommutative CHSH bounds and operator-algebra diagnostics"};
    app.require_subcommand(1);

    struct Command {
        const char* name;
        const char* help;
        int (*fn)(const RunContext&);
    };
    const Command commands[] = {
        {"phases", "Newtonian branch phases for the two-mass protocol", cmd_phases},
        {"bipartite", "final two-mass state, negativity and phase criterion", cmd_bipartite},
        {"tripartite", "mediated evolution and matter-matter entanglement", cmd_tripartite},
        {"modes", "lattice mode-sum potential vs the Newtonian limit", cmd_modes},
        {"witness", "negativity across a relative-phase grid", cmd_witness},
        {"chsh", "see-saw maximization of the CHSH value", cmd_chsh},
        {"sos-check", "sum-of-squares residual scan for random tuples", cmd_sos_check},
        {"tsirelson-scan", "spectral ceiling scan for the symmetrized CHSH", cmd_tsirelson_scan},
        {"algebra", "commutant/center/factor diagnostics for canned examples", cmd_algebra},
        {"nosignal", "no-signalling and signalling-witness verdicts", cmd_nosignal},
        {"dressing", "dressed-commutator figures of merit", cmd_dressing},
        {"suite", "run the whole release battery", cmd_suite},
    };

    std::vector<CommonFlags> flag_sets(std::size(commands));
    struct Selected {
        const Command* cmd = nullptr;
        CommonFlags* flags = nullptr;
    } selected;

    for (std::size_t i = 0; i < std::size(commands); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i].name, commands[i].help);
        add_common_flags(sub, flag_sets[i]);
        sub->callback([&selected, &commands, &flag_sets, i] {
            selected.cmd = &commands[i];
            selected.flags = &flag_sets[i];
        });
    }

    std::vector<const char*> argv;
    argv.push_back("gielab");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return selected.cmd->fn(make_context(selected.cmd->name, *selected.flags));
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical contract violation: %s\n", e.what());
        return 3;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace gielab::cli
