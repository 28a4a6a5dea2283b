#include "fdam/config.hpp"

#include "fdam/fit.hpp"
#include "fdam/tensor_io.hpp"

namespace fdam {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known) throw_invalid("config: unknown field " + section + "." + it.key());
    }
}

const json* field(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

index_t get_count(const json& obj, const std::string& section, const char* key,
                  index_t fallback) {
    const json* v = field(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer() || v->get<double>() < 0)
        throw_invalid("config: " + section + "." + key + " must be a nonnegative integer");
    return v->get<index_t>();
}

double get_real(const json& obj, const std::string& section, const char* key, double fallback) {
    const json* v = field(obj, key);
    if (!v) return fallback;
    if (!v->is_number()) throw_invalid("config: " + section + "." + key + " must be a number");
    return v->get<double>();
}

bool get_bool(const json& obj, const std::string& section, const char* key, bool fallback) {
    const json* v = field(obj, key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw_invalid("config: " + section + "." + key + " must be a boolean");
    return v->get<bool>();
}

std::string get_string(const json& obj, const std::string& section, const char* key,
                       const std::string& fallback) {
    const json* v = field(obj, key);
    if (!v) return fallback;
    if (!v->is_string()) throw_invalid("config: " + section + "." + key + " must be a string");
    return v->get<std::string>();
}

void parse_stack(const json& obj, StackConfig& stack) {
    check_keys(obj, "stack",
               {"layers", "heads", "channels", "height", "width", "mode", "seed", "residual",
                "attinv_kernel", "attinv_bias_low", "attinv_bias_high", "freq_groups",
                "freq_bases", "freq_band", "freq_static_scale"});
    stack.layers = get_count(obj, "stack", "layers", stack.layers);
    stack.attention.heads = get_count(obj, "stack", "heads", stack.attention.heads);
    stack.attention.channels = get_count(obj, "stack", "channels", stack.attention.channels);
    stack.attention.height = get_count(obj, "stack", "height", stack.attention.height);
    stack.attention.width = get_count(obj, "stack", "width", stack.attention.width);
    stack.mode = stack_mode_from_string(get_string(obj, "stack", "mode", to_string(stack.mode)));
    if (const json* v = field(obj, "seed")) {
        if (!v->is_number_integer() || v->get<double>() < 0)
            throw_invalid("config: stack.seed must be a nonnegative integer");
        stack.seed.value = v->get<std::uint64_t>();
    }
    stack.residual = get_bool(obj, "stack", "residual", stack.residual);
    stack.attinv_kernel = get_count(obj, "stack", "attinv_kernel", stack.attinv_kernel);
    stack.attinv_bias_low = get_real(obj, "stack", "attinv_bias_low", stack.attinv_bias_low);
    stack.attinv_bias_high = get_real(obj, "stack", "attinv_bias_high", stack.attinv_bias_high);
    stack.freq_groups = get_count(obj, "stack", "freq_groups", stack.freq_groups);
    stack.freq_bases = get_count(obj, "stack", "freq_bases", stack.freq_bases);
    stack.freq_band = get_count(obj, "stack", "freq_band", stack.freq_band);
    stack.freq_static_scale =
        get_real(obj, "stack", "freq_static_scale", stack.freq_static_scale);
}

void parse_diagnostics(const json& obj, DiagnosticsConfig& diag) {
    check_keys(obj, "diagnostics", {"bands", "cutoff"});
    diag.bands = get_count(obj, "diagnostics", "bands", diag.bands);
    if (diag.bands < 2) throw_invalid("config: diagnostics.bands must be >= 2");
    diag.cutoff = get_real(obj, "diagnostics", "cutoff", diag.cutoff);
    if (diag.cutoff <= 0.0 || diag.cutoff >= 1.0)
        throw_invalid("config: diagnostics.cutoff must be in (0,1)");
}

void parse_fit(const json& obj, FitConfig& fit) {
    check_keys(obj, "fit",
               {"targets", "cutoff", "low_cutoff", "high_cutoff", "max_iterations",
                "initial_step", "grad_tolerance"});
    if (const json* v = field(obj, "targets")) {
        if (!v->is_array() || v->empty())
            throw_invalid("config: fit.targets must be a nonempty array of strings");
        fit.targets.clear();
        for (const json& t : *v) {
            if (!t.is_string())
                throw_invalid("config: fit.targets must be a nonempty array of strings");
            fit.targets.push_back(t.get<std::string>());
        }
    }
    fit.cutoff = get_real(obj, "fit", "cutoff", fit.cutoff);
    fit.low = get_real(obj, "fit", "low_cutoff", fit.low);
    fit.high = get_real(obj, "fit", "high_cutoff", fit.high);
    fit.max_iterations = get_count(obj, "fit", "max_iterations", fit.max_iterations);
    fit.initial_step = get_real(obj, "fit", "initial_step", fit.initial_step);
    fit.grad_tolerance = get_real(obj, "fit", "grad_tolerance", fit.grad_tolerance);
    if (fit.cutoff <= 0.0 || fit.cutoff >= 1.0)
        throw_invalid("config: fit.cutoff must be in (0,1)");
    if (fit.low <= 0.0 || fit.low >= 1.0 || fit.high <= 0.0 || fit.high >= 1.0 ||
        fit.low >= fit.high)
        throw_invalid("config: fit.low_cutoff/high_cutoff must be in (0,1) with low < high");
    if (fit.max_iterations < 1) throw_invalid("config: fit.max_iterations must be >= 1");
    if (fit.initial_step <= 0.0) throw_invalid("config: fit.initial_step must be > 0");
    if (fit.grad_tolerance <= 0.0) throw_invalid("config: fit.grad_tolerance must be > 0");
}

void parse_input(const json& obj, InputConfig& input) {
    check_keys(obj, "input", {"kind", "path"});
    input.kind = get_string(obj, "input", "kind", input.kind);
    input.path = get_string(obj, "input", "path", input.path);
    if (input.kind != "white_noise" && input.kind != "tensor_file")
        throw_invalid("config: input.kind must be \"white_noise\" or \"tensor_file\"");
    if (input.kind == "tensor_file" && input.path.empty())
        throw_invalid("config: input.path is required when input.kind is \"tensor_file\"");
}

}  // namespace

std::string to_string(StackMode mode) {
    switch (mode) {
        case StackMode::plain: return "plain";
        case StackMode::attinv: return "attinv";
        case StackMode::attinv_freqscale: return "attinv+freqscale";
    }
    return "?";
}

StackMode stack_mode_from_string(const std::string& name) {
    if (name == "plain") return StackMode::plain;
    if (name == "attinv") return StackMode::attinv;
    if (name == "attinv+freqscale") return StackMode::attinv_freqscale;
    throw_invalid("config: stack.mode must be \"plain\", \"attinv\", or \"attinv+freqscale\" (got \"" +
                  name + "\")");
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw_invalid(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw_invalid(origin + ": top level must be a JSON object");
    check_keys(doc, "<top>", {"stack", "diagnostics", "fit", "input"});

    ExperimentConfig cfg;
    cfg.snapshot = doc;
    if (const json* v = field(doc, "stack")) {
        if (!v->is_object()) throw_invalid("config: stack must be an object");
        parse_stack(*v, cfg.stack);
    }
    if (const json* v = field(doc, "diagnostics")) {
        if (!v->is_object()) throw_invalid("config: diagnostics must be an object");
        parse_diagnostics(*v, cfg.diagnostics);
    }
    if (const json* v = field(doc, "fit")) {
        if (!v->is_object()) throw_invalid("config: fit must be an object");
        parse_fit(*v, cfg.fit);
    }
    if (const json* v = field(doc, "input")) {
        if (!v->is_object()) throw_invalid("config: input must be an object");
        parse_input(*v, cfg.input);
    }
    cfg.stack.validate();
    for (const std::string& name : cfg.fit.targets) target_kind_from_string(name);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path), path);
}

}  // namespace fdam
