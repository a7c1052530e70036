// Copyright 2026 The InPipe Authors
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

// Locale-independent CSV emitters. Numbers use 17 significant digits so that
// parsing the text gives back the same double.

#ifndef INPIPE_CSV_HPP_
#define INPIPE_CSV_HPP_

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "inpipe/arm_statics.hpp"
#include "inpipe/pipe.hpp"
#include "inpipe/scenario.hpp"

namespace inpipe::csv {

std::string format_number(double value);
// Strict parse of a whole field. Throws ValidationError.
double parse_number(std::string_view text);

void write_statics_sweep(std::ostream& out,
                         std::span<const StaticsSample> samples);
void write_stiffness_design(std::ostream& out,
                            std::span<const StiffnessDesignRow> rows);
void write_torque_map(std::ostream& out, std::span<const TorqueMapCell> cells);
void write_trajectory(std::ostream& out, std::span<const TrajectoryRow> rows);

// Long format, header `matrix,row,col,value`.
void write_matrix_header(std::ostream& out);
void write_matrix(std::ostream& out, std::string_view name,
                  const Eigen::MatrixXd& m);

// Header `quantity,value`.
void write_key_values(
    std::ostream& out,
    std::span<const std::pair<std::string, double>> entries);

}  // namespace inpipe::csv

#endif  // INPIPE_CSV_HPP_
