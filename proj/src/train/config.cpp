#include "gad/train/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

#include "gad/errors.hpp"

namespace gad {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        std::string item = s.substr(start, comma - start);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
        start = comma + 1;
    }
    return out;
}

std::size_t parse_count(const std::string& s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("expected a non-negative integer, got '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("expected an unsigned integer, got '" + s + "'");
    return v;
}

double parse_real(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("expected a number, got '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s) {
    const std::string t = lower(s);
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    throw ConfigError("expected a boolean, got '" + s + "'");
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
    return out;
}

}  // namespace

std::string to_string(TrainingMode mode) { return mode == TrainingMode::joint ? "joint" : "decoupled"; }
std::string to_string(SslObjective ssl) { return ssl == SslObjective::dgi ? "dgi" : "dci"; }
std::string to_string(SelectionProtocol p) { return p == SelectionProtocol::best_test ? "best_test" : "validation"; }

std::size_t default_folds_for(const std::string& dataset_name) { return lower(dataset_name) == "amazon" ? 5 : 10; }

std::vector<std::string> validation_errors(const TrainingConfig& c) {
    std::vector<std::string> errors;
    if (c.classify_iterations == 0) errors.push_back("classify-iterations must be positive");
    if (c.recluster_interval == 0) errors.push_back("recluster-interval must be positive");
    if (c.clusters == 0) errors.push_back("clusters must be positive");
    if (!(c.adam.lr >= 0.0) || !std::isfinite(c.adam.lr)) errors.push_back("lr must be a finite non-negative number");
    if (!(c.adam.beta1 >= 0.0 && c.adam.beta1 < 1.0)) errors.push_back("beta1 must lie in [0,1)");
    if (!(c.adam.beta2 >= 0.0 && c.adam.beta2 < 1.0)) errors.push_back("beta2 must lie in [0,1)");
    if (!(c.adam.eps > 0.0)) errors.push_back("adam-eps must be positive");
    if (c.embedding_dim == 0) errors.push_back("embedding-dim must be positive");
    if (c.feature_dim == 0) errors.push_back("feature-dim must be positive");
    if (c.layers == 0) errors.push_back("layers must be positive");
    if (c.folds < 2) errors.push_back("folds must be at least 2");
    if (c.early_stopping_patience && *c.early_stopping_patience == 0) errors.push_back("early-stopping patience must be positive");
    if (!(c.validation_fraction > 0.0 && c.validation_fraction < 1.0)) errors.push_back("validation-fraction must lie in (0,1)");
    if (c.encoder == EncoderKind::multi) {
        if (c.members.empty()) errors.push_back("members must list at least one encoder");
        if (std::find(c.members.begin(), c.members.end(), EncoderKind::multi) != c.members.end())
            errors.push_back("members cannot include multi");
        if (c.merge == MergeOp::weighted_mean) {
            if (c.merge_weights.size() != c.members.size()) {
                errors.push_back("merge-weights needs one weight per member");
            } else {
                double total = 0.0;
                for (double w : c.merge_weights) total += w;
                if (std::abs(total - 1.0) > 1e-9) errors.push_back("merge-weights must sum to 1");
            }
        }
    }
    return errors;
}

void validate(const TrainingConfig& config) {
    const auto errors = validation_errors(config);
    if (errors.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
}

EncoderConfig encoder_config(const TrainingConfig& c) {
    EncoderConfig e;
    e.kind = c.encoder;
    e.input_dim = c.feature_dim;
    e.embedding_dim = c.embedding_dim;
    e.layers = c.layers;
    e.gin_eps = c.gin_eps;
    e.learn_gin_eps = c.learn_gin_eps;
    e.gat_slope = c.gat_slope;
    e.members = c.members;
    e.merge = c.merge;
    e.merge_weights = c.merge_weights;
    return e;
}

std::map<std::string, std::string> to_key_values(const TrainingConfig& c) {
    std::vector<std::string> members;
    for (EncoderKind m : c.members) members.push_back(to_string(m));
    std::vector<std::string> weights;
    for (double w : c.merge_weights) weights.push_back(fmt_double(w));
    return {
        {"mode", to_string(c.mode)},
        {"encoder", to_string(c.encoder)},
        {"ssl", to_string(c.ssl)},
        {"pretrain-epochs", std::to_string(c.pretrain_epochs)},
        {"classify-iterations", std::to_string(c.classify_iterations)},
        {"recluster-interval", std::to_string(c.recluster_interval)},
        {"clusters", std::to_string(c.clusters)},
        {"lr", fmt_double(c.adam.lr)},
        {"beta1", fmt_double(c.adam.beta1)},
        {"beta2", fmt_double(c.adam.beta2)},
        {"adam-eps", fmt_double(c.adam.eps)},
        {"embedding-dim", std::to_string(c.embedding_dim)},
        {"feature-dim", std::to_string(c.feature_dim)},
        {"layers", std::to_string(c.layers)},
        {"gin-eps", fmt_double(c.gin_eps)},
        {"learn-gin-eps", c.learn_gin_eps ? "true" : "false"},
        {"gat-slope", fmt_double(c.gat_slope)},
        {"members", join(members)},
        {"merge", to_string(c.merge)},
        {"merge-weights", join(weights)},
        {"folds", std::to_string(c.folds)},
        {"seed", std::to_string(c.seed)},
        {"early-stopping", c.early_stopping_patience ? std::to_string(*c.early_stopping_patience) : "off"},
        {"protocol", to_string(c.protocol)},
        {"validation-fraction", fmt_double(c.validation_fraction)},
        {"class-weighting", c.class_weighting ? "true" : "false"},
        {"parallel-folds", c.parallel_folds ? "true" : "false"},
    };
}

TrainingConfig apply_key_values(TrainingConfig c, const std::map<std::string, std::string>& kv) {
    using Setter = std::function<void(const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"mode",
         [&](const std::string& v) {
             if (v == "joint") c.mode = TrainingMode::joint;
             else if (v == "decoupled") c.mode = TrainingMode::decoupled;
             else throw ConfigError("expected joint or decoupled, got '" + v + "'");
         }},
        {"encoder", [&](const std::string& v) { c.encoder = parse_encoder_kind(v); }},
        {"ssl",
         [&](const std::string& v) {
             if (v == "dgi") c.ssl = SslObjective::dgi;
             else if (v == "dci") c.ssl = SslObjective::dci;
             else throw ConfigError("expected dgi or dci, got '" + v + "'");
         }},
        {"pretrain-epochs", [&](const std::string& v) { c.pretrain_epochs = parse_count(v); }},
        {"classify-iterations", [&](const std::string& v) { c.classify_iterations = parse_count(v); }},
        {"recluster-interval", [&](const std::string& v) { c.recluster_interval = parse_count(v); }},
        {"clusters", [&](const std::string& v) { c.clusters = parse_count(v); }},
        {"lr", [&](const std::string& v) { c.adam.lr = parse_real(v); }},
        {"beta1", [&](const std::string& v) { c.adam.beta1 = parse_real(v); }},
        {"beta2", [&](const std::string& v) { c.adam.beta2 = parse_real(v); }},
        {"adam-eps", [&](const std::string& v) { c.adam.eps = parse_real(v); }},
        {"embedding-dim", [&](const std::string& v) { c.embedding_dim = parse_count(v); }},
        {"feature-dim", [&](const std::string& v) { c.feature_dim = parse_count(v); }},
        {"layers", [&](const std::string& v) { c.layers = parse_count(v); }},
        {"gin-eps", [&](const std::string& v) { c.gin_eps = parse_real(v); }},
        {"learn-gin-eps", [&](const std::string& v) { c.learn_gin_eps = parse_bool(v); }},
        {"gat-slope", [&](const std::string& v) { c.gat_slope = parse_real(v); }},
        {"members",
         [&](const std::string& v) {
             c.members.clear();
             for (const auto& m : split_list(v)) c.members.push_back(parse_encoder_kind(m));
         }},
        {"merge", [&](const std::string& v) { c.merge = parse_merge_op(v); }},
        {"merge-weights",
         [&](const std::string& v) {
             c.merge_weights.clear();
             for (const auto& w : split_list(v)) c.merge_weights.push_back(parse_real(w));
         }},
        {"folds", [&](const std::string& v) { c.folds = parse_count(v); }},
        {"seed", [&](const std::string& v) { c.seed = parse_u64(v); }},
        {"early-stopping",
         [&](const std::string& v) {
             if (lower(v) == "off") c.early_stopping_patience.reset();
             else c.early_stopping_patience = parse_count(v);
         }},
        {"protocol",
         [&](const std::string& v) {
             if (v == "best_test") c.protocol = SelectionProtocol::best_test;
             else if (v == "validation") c.protocol = SelectionProtocol::validation;
             else throw ConfigError("expected best_test or validation, got '" + v + "'");
         }},
        {"validation-fraction", [&](const std::string& v) { c.validation_fraction = parse_real(v); }},
        {"class-weighting", [&](const std::string& v) { c.class_weighting = parse_bool(v); }},
        {"parallel-folds", [&](const std::string& v) { c.parallel_folds = parse_bool(v); }},
    };
    std::vector<std::string> errors;
    for (const auto& [key, value] : kv) {
        auto it = setters.find(key);
        if (it == setters.end()) {
            errors.push_back("unknown key '" + key + "'");
            continue;
        }
        try {
            it->second(value);
        } catch (const ConfigError& e) {
            errors.push_back(key + ": " + e.what());
        }
    }
    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    return c;
}

std::string model_label(const TrainingConfig& c) {
    auto encoder_name = [](EncoderKind k) {
        switch (k) {
            case EncoderKind::gin: return std::string("GIN");
            case EncoderKind::gat: return std::string("GAT");
            case EncoderKind::gcn: return std::string("GCN");
            case EncoderKind::multi: return std::string("MultiEncoder");
        }
        return std::string("?");
    };
    if (c.mode == TrainingMode::joint) return "Joint " + encoder_name(c.encoder);
    if (c.ssl == SslObjective::dci && c.encoder == EncoderKind::multi) return "MultiEncoder";
    if (c.ssl == SslObjective::dgi && c.encoder == EncoderKind::gin) return "Decoupled DGI";
    return "Decoupled " + std::string(c.ssl == SslObjective::dgi ? "DGI" : "DCI") + " (" + encoder_name(c.encoder) + ")";
}

}  // namespace gad
