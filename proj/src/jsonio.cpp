#include "mpxeq/jsonio.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace mpxeq {

namespace {

void expect_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok)
            throw Error(ErrorCode::parse_error, "unknown key '" + item.key() + "'", where);
    }
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw Error(ErrorCode::parse_error, "expected a number", where);
    return v.get<double>();
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

MultiplexEconomy parse_economy(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::parse_error, "top level must be an object");
    expect_keys(doc, {"consumers", "goods"}, "$");
    if (!doc.contains("consumers") || !doc["consumers"].is_array())
        throw Error(ErrorCode::parse_error, "missing 'consumers' array", "consumers");
    if (!doc.contains("goods") || !doc["goods"].is_array())
        throw Error(ErrorCode::parse_error, "missing 'goods' array", "goods");

    MultiplexEconomy economy;
    for (const auto& c : doc["consumers"]) {
        if (!c.is_string()) throw Error(ErrorCode::parse_error, "consumer names must be strings", "consumers");
        economy.consumer_names.push_back(c.get<std::string>());
    }
    const int n = economy.consumer_count();

    int s = 0;
    for (const auto& g : doc["goods"]) {
        const std::string base = "goods[" + std::to_string(s) + "]";
        if (!g.is_object()) throw Error(ErrorCode::parse_error, "each good must be an object", base);
        expect_keys(g, {"name", "alpha", "phi", "network", "endowments"}, base);
        for (const char* req : {"name", "alpha", "phi", "network", "endowments"})
            if (!g.contains(req))
                throw Error(ErrorCode::parse_error, std::string("missing key '") + req + "'", base);

        GoodLayer layer;
        if (!g["name"].is_string()) throw Error(ErrorCode::parse_error, "good name must be a string", base + ".name");
        layer.name = g["name"].get<std::string>();
        layer.alpha = as_number(g["alpha"], base + ".alpha");
        layer.phi = as_number(g["phi"], base + ".phi");

        const auto& endw = g["endowments"];
        if (!endw.is_array() || static_cast<int>(endw.size()) != n)
            throw Error(ErrorCode::parse_error, "endowments must be an array of length n", base + ".endowments");
        layer.endowments.resize(n);
        for (int i = 0; i < n; ++i)
            layer.endowments(i) = as_number(endw[i], base + ".endowments[" + std::to_string(i) + "]");

        const auto& net = g["network"];
        if (!net.is_array() || static_cast<int>(net.size()) != n)
            throw Error(ErrorCode::parse_error, "network must be an n x n array", base + ".network");
        layer.network.resize(n, n);
        for (int i = 0; i < n; ++i) {
            const auto& row = net[i];
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw Error(ErrorCode::parse_error, "network rows must have length n",
                            base + ".network[" + std::to_string(i) + "]");
            for (int j = 0; j < n; ++j)
                layer.network(i, j) =
                    as_number(row[j], base + ".network[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
        economy.goods.push_back(std::move(layer));
        ++s;
    }
    validate_structure(economy);
    return economy;
}

MultiplexEconomy load_economy(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_economy(buf.str());
}

json to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

json to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string serialize_economy(const MultiplexEconomy& economy) {
    json doc;
    doc["consumers"] = economy.consumer_names;
    json goods = json::array();
    for (const auto& g : economy.goods) {
        json jg;
        jg["name"] = g.name;
        jg["alpha"] = g.alpha;
        jg["phi"] = g.phi;
        jg["network"] = to_json(g.network);
        jg["endowments"] = to_json(g.endowments);
        goods.push_back(std::move(jg));
    }
    doc["goods"] = std::move(goods);
    return dump_json(doc);
}

std::string economy_hash(const MultiplexEconomy& economy) {
    const std::string text = serialize_economy(economy);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

namespace {

void escape_string(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void dump_value(const json& v, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& item : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                escape_string(item.key(), out);
                out += ": ";
                dump_value(item.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            // scalar-only arrays stay on one line
            bool nested = false;
            for (const auto& e : v)
                if (e.is_structured()) nested = true;
            if (!nested) {
                out += "[";
                bool first = true;
                for (const auto& e : v) {
                    if (!first) out += ", ";
                    first = false;
                    dump_value(e, out, indent, depth + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& e : v) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_value(e, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::string:
            escape_string(v.get<std::string>(), out);
            return;
        case json::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            return;
        case json::value_t::number_integer:
            out += std::to_string(v.get<std::int64_t>());
            return;
        case json::value_t::number_unsigned:
            out += std::to_string(v.get<std::uint64_t>());
            return;
        case json::value_t::number_float: {
            const double d = v.get<double>();
            if (std::isfinite(d))
                out += format_double(d);
            else  // JSON has no inf/nan literals
                out += std::isnan(d) ? "\"nan\"" : (d > 0 ? "\"inf\"" : "\"-inf\"");
            return;
        }
        case json::value_t::null:
        default:
            out += "null";
            return;
    }
}

void flatten(const json& v, const std::string& path, std::string& out) {
    if (v.is_object()) {
        for (const auto& item : v.items())
            flatten(item.value(), path.empty() ? item.key() : path + "." + item.key(), out);
    } else if (v.is_array()) {
        int i = 0;
        for (const auto& e : v) flatten(e, path + "[" + std::to_string(i++) + "]", out);
    } else {
        out += path;
        out += ',';
        if (v.is_string()) {
            out += v.get<std::string>();
        } else if (v.is_boolean()) {
            out += v.get<bool>() ? "true" : "false";
        } else if (v.is_number_float()) {
            out += format_double(v.get<double>());
        } else if (v.is_number()) {
            out += std::to_string(v.get<std::int64_t>());
        } else {
            out += "null";
        }
        out += '\n';
    }
}

} // namespace

std::string dump_json(const json& value, int indent) {
    std::string out;
    dump_value(value, out, indent, 0);
    out += '\n';
    return out;
}

std::string dump_csv_flat(const json& value) {
    std::string out = "key,value\n";
    flatten(value, "", out);
    return out;
}

} // namespace mpxeq
