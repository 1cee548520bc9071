#include "robustnet/model.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace robustnet {

double dbm_to_linear(double dbm) {
    if (!std::isfinite(dbm)) throw InvalidParameter("level_dbm", "must be finite");
    return std::pow(10.0, dbm / 10.0);
}

double linear_to_dbm(double mw) {
    if (!(mw > 0) || !std::isfinite(mw))
        throw InvalidParameter("level_mw", "must be positive and finite");
    return 10.0 * std::log10(mw);
}

double grid_half_width_from_density(int n_nodes, double density) {
    if (n_nodes < 1) throw InvalidParameter("n_nodes", "must be >= 1");
    if (!(density > 0) || !std::isfinite(density))
        throw InvalidParameter("node_density", "must be positive");
    // n / (2a)^2 = density
    return 0.5 * std::sqrt(n_nodes / density);
}

namespace {

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw InvalidParameter(field, "must be finite");
}

}  // namespace

NetworkConfig validate(const NetworkConfig& cfg) {
    NetworkConfig c = cfg;
    if (c.n_nodes < 1) throw InvalidParameter("n_nodes", "must be >= 1");
    require_finite(c.ch_probability, "ch_probability");
    if (c.ch_probability < 0 || c.ch_probability > 1)
        throw InvalidParameter("ch_probability", "must lie in [0, 1]");
    require_finite(c.p_tx_node_dbm, "p_tx_node_dbm");
    require_finite(c.p_tx_bs_dbm, "p_tx_bs_dbm");
    require_finite(c.p_threshold_dbm, "p_threshold_dbm");
    require_finite(c.path_loss_exponent, "path_loss_exponent");
    if (!(c.path_loss_exponent > 0))
        throw InvalidParameter("path_loss_exponent", "must be > 0");

    const bool have_a = c.grid_half_width > 0;
    const bool have_d = c.node_density > 0;
    if (have_a && !std::isfinite(c.grid_half_width))
        throw InvalidParameter("grid_half_width", "must be finite");
    if (have_d && !std::isfinite(c.node_density))
        throw InvalidParameter("node_density", "must be finite");
    if (!have_a && !have_d)
        throw InvalidParameter("grid_half_width",
                               "either grid_half_width or node_density must be set");
    if (have_a && have_d) {
        const double derived = grid_half_width_from_density(c.n_nodes, c.node_density);
        if (std::abs(c.grid_half_width - derived) > 1e-6 * derived)
            throw InvalidParameter("grid_half_width",
                                   "inconsistent with node_density (expected " +
                                       std::to_string(derived) + ")");
    } else if (have_d) {
        c.grid_half_width = grid_half_width_from_density(c.n_nodes, c.node_density);
    } else {
        c.node_density = c.n_nodes / (4.0 * c.grid_half_width * c.grid_half_width);
    }
    return c;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace((unsigned char)s[b])) ++b;
    while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& text) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw InvalidParameter(key, "not a number: '" + text + "'");
    }
    if (pos != text.size()) throw InvalidParameter(key, "trailing junk: '" + text + "'");
    return v;
}

}  // namespace

NetworkConfig parse_config(const std::string& text) {
    NetworkConfig c;
    c.grid_half_width = 0;  // unset unless the file provides one
    c.node_density = 0;
    bool saw_density = false, saw_width = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config", "expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "n_nodes") {
            const double v = parse_number(key, val);
            if (v != std::floor(v)) throw InvalidParameter(key, "must be an integer");
            c.n_nodes = (int)v;
        } else if (key == "ch_probability") {
            c.ch_probability = parse_number(key, val);
        } else if (key == "grid_half_width") {
            c.grid_half_width = parse_number(key, val);
            saw_width = true;
        } else if (key == "node_density") {
            c.node_density = parse_number(key, val);
            saw_density = true;
        } else if (key == "p_tx_node_dbm") {
            c.p_tx_node_dbm = parse_number(key, val);
        } else if (key == "p_tx_bs_dbm") {
            c.p_tx_bs_dbm = parse_number(key, val);
        } else if (key == "p_threshold_dbm") {
            c.p_threshold_dbm = parse_number(key, val);
        } else if (key == "path_loss_exponent") {
            c.path_loss_exponent = parse_number(key, val);
        } else {
            throw InvalidParameter(key, "unknown key");
        }
    }
    if (!saw_density && !saw_width) c.node_density = 1.0;  // field default
    return validate(c);
}

NetworkConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidParameter("config", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

}  // namespace robustnet
