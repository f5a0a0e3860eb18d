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

#ifndef BIPHOTON_SERIALIZATION_H
#define BIPHOTON_SERIALIZATION_H

#include <string>

#include <nlohmann/json.hpp>

#include "biphoton/numerics.h"
#include "biphoton/qstate.h"

namespace biphoton {

// Complex numbers serialize as [re, im]; vectors as lists of those and
// matrices as lists of rows. Layouts are {"dims": [...], "labels": [...]}.

nlohmann::ordered_json to_json(const ComplexVector &v);
nlohmann::ordered_json to_json(const ComplexMatrix &m);
nlohmann::ordered_json to_json(const PureState &psi);
nlohmann::ordered_json to_json(const DensityOperator &rho);

ComplexVector vector_from_json(const nlohmann::ordered_json &j);
ComplexMatrix matrix_from_json(const nlohmann::ordered_json &j);
PureState pure_state_from_json(const nlohmann::ordered_json &j);
DensityOperator density_from_json(const nlohmann::ordered_json &j);

/// printf("%.17g"), which round-trips every finite double. Non-finite values
/// become "nan", "inf" or "-inf".
std::string format_double(double x);

/// Serializes with fixed key order, two-space indentation, '\n' newlines and
/// 17-significant-digit numbers. Output depends only on the value.
std::string dump_json(const nlohmann::ordered_json &j);

}  // namespace biphoton

#endif
