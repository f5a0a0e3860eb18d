// Copyright 2026 The Biphoton Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "biphoton/serialization.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace biphoton {

using nlohmann::ordered_json;

namespace {

ordered_json complex_json(Complex z) {
    return ordered_json::array({z.real(), z.imag()});
}

Complex complex_from(const ordered_json &j) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("complex value must be a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json layout_json(const SubsystemLayout &layout) {
    return ordered_json{{"dims", layout.dims()}, {"labels", layout.labels()}};
}

SubsystemLayout layout_from(const ordered_json &j) {
    return SubsystemLayout(j.at("dims").get<std::vector<std::size_t>>(),
                           j.at("labels").get<std::vector<std::string>>());
}

void dump_into(const ordered_json &j, int depth, std::string &out) {
    const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
    const std::string close_pad(2 * static_cast<std::size_t>(depth), ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto &[key, value] : j.items()) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += pad + ordered_json(key).dump() + ": ";
                dump_into(value, depth + 1, out);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto &v : j) {
                flat = flat && !v.is_structured();
            }
            if (flat) {
                out += "[";
                for (std::size_t k = 0; k < j.size(); k++) {
                    out += k ? ", " : "";
                    dump_into(j[k], depth + 1, out);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t k = 0; k < j.size(); k++) {
                out += k ? ",\n" : "";
                out += pad;
                dump_into(j[k], depth + 1, out);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case ordered_json::value_t::number_float: {
            double x = j.get<double>();
            out += std::isfinite(x) ? format_double(x) : "null";
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

ordered_json to_json(const ComplexVector &v) {
    ordered_json out = ordered_json::array();
    for (const auto &z : v.entries()) {
        out.push_back(complex_json(z));
    }
    return out;
}

ordered_json to_json(const ComplexMatrix &m) {
    ordered_json out = ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); r++) {
        ordered_json row = ordered_json::array();
        for (std::size_t c = 0; c < m.cols(); c++) {
            row.push_back(complex_json(m(r, c)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

ordered_json to_json(const PureState &psi) {
    return ordered_json{{"layout", layout_json(psi.layout())}, {"amplitudes", to_json(psi.amplitudes())}};
}

ordered_json to_json(const DensityOperator &rho) {
    return ordered_json{{"layout", layout_json(rho.layout())}, {"matrix", to_json(rho.matrix())}};
}

ComplexVector vector_from_json(const ordered_json &j) {
    if (!j.is_array()) {
        throw std::invalid_argument("vector must be a list of [re, im] pairs");
    }
    std::vector<Complex> entries;
    for (const auto &z : j) {
        entries.push_back(complex_from(z));
    }
    return ComplexVector(std::move(entries));
}

ComplexMatrix matrix_from_json(const ordered_json &j) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument("matrix must be a non-empty list of rows");
    }
    const std::size_t cols = j[0].size();
    std::vector<Complex> entries;
    for (const auto &row : j) {
        if (!row.is_array() || row.size() != cols) {
            throw std::invalid_argument("matrix rows must be lists of equal length");
        }
        for (const auto &z : row) {
            entries.push_back(complex_from(z));
        }
    }
    return ComplexMatrix(j.size(), cols, std::move(entries));
}

PureState pure_state_from_json(const ordered_json &j) {
    return PureState(vector_from_json(j.at("amplitudes")), layout_from(j.at("layout")));
}

DensityOperator density_from_json(const ordered_json &j) {
    return DensityOperator(matrix_from_json(j.at("matrix")), layout_from(j.at("layout")));
}

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string dump_json(const ordered_json &j) {
    std::string out;
    dump_into(j, 0, out);
    out += "\n";
    return out;
}

}  // namespace biphoton
