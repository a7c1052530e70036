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

#include "inpipe/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "inpipe/arm_statics.hpp"
#include "inpipe/config.hpp"
#include "inpipe/csv.hpp"
#include "inpipe/error.hpp"
#include "inpipe/lqr.hpp"
#include "inpipe/pipe.hpp"
#include "inpipe/scenario.hpp"

namespace inpipe::cli {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
// Published estimate of the largest retraction torque, N mm.
constexpr double kReferenceRetractionNmm = 2200.0;

struct Common {
  std::string config = "default";
  std::string out = "-";
  bool verbose = false;
};

void add_common(CLI::App& sub, Common& common) {
  sub.add_option("--config", common.config,
                 "Scenario INI file, or 'default' for built-in values")
      ->capture_default_str();
  sub.add_option("--out", common.out, "Output CSV path, '-' for stdout")
      ->capture_default_str();
  sub.add_flag("--verbose", common.verbose, "Echo the resolved parameters");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) throw ValidationError("empty entry in list '" + text + "'");
    out.push_back(csv::parse_number(item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

void emit(const Common& common, std::ostream& out, const std::string& text) {
  if (common.out == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(common.out, std::ios::binary);
  if (!file) throw ValidationError("cannot open output file '" + common.out + "'");
  file << text;
  file.close();
  if (!file) throw ValidationError("failed writing output file '" + common.out + "'");
}

ScenarioConfig load(const Common& common, std::ostream& err) {
  ScenarioConfig config = load_config(common.config);
  if (common.verbose) {
    err << "# resolved parameters (" << common.config << ")\n";
    write_config(err, config);
  }
  return config;
}

std::vector<std::pair<std::string, double>> fit_report() {
  const std::vector<OperatingPoint> points = reference_operating_points();
  const OperatingFit fit = fit_operating_params(points);
  std::vector<std::pair<std::string, double>> rows = {
      {"wheel_radius_mm", fit.wheel_radius_m * 1e3},
      {"net_weight_N", fit.net_weight_N}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::string tag = std::to_string(i + 1);
    rows.emplace_back("point" + tag + "_measured_Nm", points[i].torque_Nm);
    rows.emplace_back("point" + tag + "_model_Nm",
                      required_wheel_torque(points[i].drag_N,
                                            points[i].inclination,
                                            fit.net_weight_N,
                                            fit.wheel_radius_m));
    rows.emplace_back("point" + tag + "_relative_residual",
                      fit.relative_residuals[i]);
  }
  return rows;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"In-pipe robot statics, dynamics and self-rescue simulation",
               "inpipe"};
  app.require_subcommand(1);

  Common common;
  std::function<void()> action;

  double step_deg = 1.0;
  auto* statics = app.add_subcommand("statics-sweep",
                                     "Arm statics over beta in (0, beta0]");
  add_common(*statics, common);
  statics->add_option("--step-deg", step_deg, "Sweep step in beta")
      ->capture_default_str();
  statics->callback([&] {
    action = [&] {
      const ScenarioConfig c = load(common, err);
      std::ostringstream s;
      csv::write_statics_sweep(s, statics_sweep(c.spring, step_deg * kDeg));
      emit(common, out, s.str());
    };
  });

  std::string stiffness_list = "1,2,3,4,5";
  auto* design = app.add_subcommand(
      "stiffness-design", "Contact interval and retraction torque per spring rate");
  add_common(*design, common);
  design->add_option("--k", stiffness_list, "Spring rates in N/mm")
      ->capture_default_str();
  design->callback([&] {
    action = [&] {
      const ScenarioConfig c = load(common, err);
      std::ostringstream s;
      csv::write_stiffness_design(s,
                                  stiffness_design(c.spring, parse_list(stiffness_list)));
      emit(common, out, s.str());
    };
  });

  auto* retraction = app.add_subcommand(
      "retraction-torque", "Largest moment needed to fold an arm");
  add_common(*retraction, common);
  retraction->callback([&] {
    action = [&] {
      const ScenarioConfig c = load(common, err);
      const RetractionTorque rt = max_retraction_torque(c.spring);
      const GearMotor& motor = c.robot.motor;
      const double capacity = gearmotor_capacity(
          motor.nominal_torque_Nm * 1e3, motor.reduction_ratio, motor.efficiency);
      const CapacityCheck check = check_capacity(capacity, rt.golden_Nmm);
      const std::vector<std::pair<std::string, double>> rows = {
          {"max_retraction_torque_Nmm", rt.golden_Nmm},
          {"argmax_beta_deg", rt.golden_beta / kDeg},
          {"sweep_max_Nmm", rt.sweep_Nmm},
          {"sweep_argmax_beta_deg", rt.sweep_beta / kDeg},
          {"sweep_vs_golden_relative", rt.relative_disagreement()},
          {"published_estimate_Nmm", kReferenceRetractionNmm},
          {"ratio_to_published", rt.golden_Nmm / kReferenceRetractionNmm},
          {"gearmotor_capacity_Nmm", capacity},
          {"capacity_margin_ratio", check.margin_ratio}};
      std::ostringstream s;
      csv::write_key_values(s, rows);
      emit(common, out, s.str());
      std::ostringstream line;
      line.setf(std::ios::fixed);
      line.precision(2);
      line << "max retraction torque " << rt.golden_Nmm << " N.mm at beta "
           << rt.golden_beta / kDeg << " deg; published estimate about "
           << kReferenceRetractionNmm << " N.mm (ratio "
           << rt.golden_Nmm / kReferenceRetractionNmm
           << "; spring and arm masses differ from the prototype)\n";
      err << line.str();
    };
  });

  std::string drag_list;
  std::string alpha_list = "0,15,30,45,60,75,90";
  auto* tmap = app.add_subcommand("torque-map",
                                  "Per-wheel torque over drag and inclination");
  add_common(*tmap, common);
  tmap->add_option("--drag", drag_list,
                   "Drag forces in N (default: speeds 0..0.3 m/s)");
  tmap->add_option("--alpha-deg", alpha_list, "Inclinations in degrees")
      ->capture_default_str();
  tmap->callback([&] {
    action = [&] {
      const ScenarioConfig c = load(common, err);
      std::vector<double> drags;
      if (drag_list.empty()) {
        for (int i = 0; i <= 6; ++i) drags.push_back(drag_force(c.drag, 0.05 * i));
      } else {
        drags = parse_list(drag_list);
      }
      std::vector<double> alphas = parse_list(alpha_list);
      for (double& a : alphas) a *= kDeg;
      std::ostringstream s;
      csv::write_torque_map(
          s, torque_map(drags, alphas, c.robot.net_weight_N,
                        c.robot.wheel_radius, c.robot.motor.capacity_Nm()));
      emit(common, out, s.str());
    };
  });

  auto* fit = app.add_subcommand(
      "fit-params", "Fit wheel radius and net weight to the four torque points");
  add_common(*fit, common);
  fit->callback([&] {
    action = [&] {
      load(common, err);
      std::ostringstream s;
      const auto rows = fit_report();
      csv::write_key_values(s, rows);
      emit(common, out, s.str());
    };
  });

  auto* lin = app.add_subcommand("linearize",
                                 "State-space model about the cruise equilibrium");
  add_common(*lin, common);
  lin->callback([&] {
    action = [&] {
      const ScenarioConfig c = load(common, err);
      c.validate();
      const RobotModel model = build_robot(c);
      const ControllerDesign d = design_controller(c, model);
      std::ostringstream s;
      csv::write_matrix_header(s);
      csv::write_matrix(s, "A", d.plant.A);
      csv::write_matrix(s, "B", d.plant.B);
      csv::write_matrix(s, "x_eq", d.plant.x_eq);
      csv::write_matrix(s, "u_eq", d.plant.u_eq);
      emit(common, out, s.str());
    };
  });

  auto* lqr = app.add_subcommand("lqr", "LQR gain about the cruise equilibrium");
  add_common(*lqr, common);
  lqr->callback([&] {
    action = [&] {
      const ScenarioConfig c = load(common, err);
      c.validate();
      const RobotModel model = build_robot(c);
      const ControllerDesign d = design_controller(c, model);
      const Eigen::VectorXcd eig =
          closed_loop_eigenvalues(d.plant.A, d.plant.B, d.gain.K);
      Eigen::MatrixXd spectrum(eig.size(), 2);
      spectrum.col(0) = eig.real();
      spectrum.col(1) = eig.imag();
      std::ostringstream s;
      csv::write_matrix_header(s);
      csv::write_matrix(s, "K", d.gain.K);
      csv::write_matrix(s, "P", d.gain.P);
      csv::write_matrix(s, "closed_loop_eig", spectrum);
      emit(common, out, s.str());
      if (common.verbose) {
        err << "# newton-kleinman iterations " << d.gain.iterations
            << ", riccati residual " << d.gain.residual << '\n';
      }
    };
  });

  auto* sim = app.add_subcommand("simulate", "Closed-loop scenario run");
  add_common(*sim, common);
  sim->callback([&] {
    action = [&] {
      const ScenarioConfig c = load(common, err);
      const ScenarioResult r = run_scenario(c);
      std::ostringstream s;
      csv::write_trajectory(s, r.log);
      emit(common, out, s.str());
      const ScenarioSummary& sum = r.summary;
      err << "modes:";
      for (SupervisorMode m : sum.modes) err << ' ' << mode_name(m);
      err << "\ncontact failure flagged: " << (sum.failure_flagged ? "yes" : "no");
      if (sum.failure_flagged) err << " (t = " << sum.failure_time << " s)";
      err << "\nobstacles traversed: " << (sum.traversed ? "yes" : "no")
          << "\nfinal arm angles inside contact interval: "
          << (sum.final_in_interval ? "yes" : "no") << '\n';
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SimulationError& e) {
    err << "aborted: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "aborted: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace inpipe::cli
