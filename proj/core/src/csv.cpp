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

#include "inpipe/csv.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "inpipe/error.hpp"

namespace inpipe::csv {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

class Row {
 public:
  explicit Row(std::ostream& out) : out_(out) {}
  ~Row() { out_ << '\n'; }
  Row& operator<<(double v) { return field(format_number(v)); }
  Row& operator<<(bool v) { return field(v ? "1" : "0"); }
  Row& operator<<(std::string_view v) { return field(v); }

 private:
  Row& field(std::string_view v) {
    if (!first_) out_ << ',';
    first_ = false;
    out_ << v;
    return *this;
  }
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

void write_statics_sweep(std::ostream& out,
                         std::span<const StaticsSample> samples) {
  out << "beta_deg,theta_deg,spring_length_mm,spring_force_N,normal_force_N,"
         "contact_ok\n";
  for (const StaticsSample& s : samples) {
    Row(out) << s.beta * kRadToDeg << s.theta * kRadToDeg << s.spring_length_mm
             << s.spring_force_N << s.normal.newtons << s.contact_ok;
  }
}

void write_stiffness_design(std::ostream& out,
                            std::span<const StiffnessDesignRow> rows) {
  out << "k_N_per_mm,theta_min_deg,theta_max_deg,interval_width_deg,"
         "max_retraction_torque_Nmm\n";
  for (const StiffnessDesignRow& r : rows) {
    Row(out) << r.stiffness_N_per_mm << r.interval.theta_min * kRadToDeg
             << r.interval.theta_max * kRadToDeg
             << r.interval.width() * kRadToDeg << r.torque.golden_Nmm;
  }
}

void write_torque_map(std::ostream& out, std::span<const TorqueMapCell> cells) {
  out << "F_D_N,alpha_deg,tau_per_wheel_Nm,within_motor_capacity\n";
  for (const TorqueMapCell& c : cells) {
    Row(out) << c.drag_N << c.inclination * kRadToDeg << c.torque_Nm
             << c.within_capacity;
  }
}

void write_trajectory(std::ostream& out, std::span<const TrajectoryRow> rows) {
  out << "t,x,y,z,roll,pitch,yaw,xd,yd,zd,roll_rate,pitch_rate,yaw_rate,"
         "tau1,tau2,tau3,i1,i2,i3,T1,T2,T3,mode,theta1_deg,theta2_deg,"
         "theta3_deg,contact1,contact2,contact3\n";
  for (const TrajectoryRow& r : rows) {
    Row row(out);
    row << r.t;
    const Vector6d q = r.q.as_vector();
    const Vector6d qd = r.qdot.as_vector();
    for (double v : q) row << v;
    for (double v : qd) row << v;
    for (double v : r.torque) row << v;
    for (double v : r.current) row << v;
    for (double v : r.tension) row << v;
    row << mode_name(r.mode);
    for (double v : r.theta) row << v * kRadToDeg;
    for (bool v : r.contact) row << v;
  }
}

void write_matrix_header(std::ostream& out) { out << "matrix,row,col,value\n"; }

void write_matrix(std::ostream& out, std::string_view name,
                  const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      Row(out) << name << std::string_view(std::to_string(i))
               << std::string_view(std::to_string(j)) << m(i, j);
    }
  }
}

void write_key_values(
    std::ostream& out,
    std::span<const std::pair<std::string, double>> entries) {
  out << "quantity,value\n";
  for (const auto& [key, value] : entries) {
    Row(out) << std::string_view(key) << value;
  }
}

}  // namespace inpipe::csv
