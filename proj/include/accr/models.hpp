#pragma once

#include <string>
#include <vector>

#include "accr/accs.hpp"
#include "accr/cr.hpp"

namespace accr {

/// Registry names.
enum class Realization {
  Flat,          // "flat"
  ModelFrame,    // "model-frame": frame cases |mu| < 2, = 2, > 2
  ModelGlobalCr, // "model-global-cr"
  ControlTwisted,// "control-twisted": almost cosymplectic, leaves not Kahler (n >= 2)
  ControlContact,// "control-contact": eta = dt - sum y dx, Levi form -2
  ProductKahler, // "product-kahler": line times a product of curved surfaces
};

struct ModelSpec {
  Realization realization = Realization::ModelFrame;
  int n = 1;
  double mu = 0.0;
  double half_width = 0.8;
};

struct ModelInfo {
  std::string name;
  Realization realization;
  std::string summary;
  int min_n;
  bool uses_mu;
};

const std::vector<ModelInfo>& model_registry();
Realization realization_from_name(const std::string& name); // throws DomainError
std::string realization_name(Realization r);

/// Which closed-form frame a mu value selects; |mu| == 2 exactly goes to Parabolic.
enum class FrameCase { Hyperbolic, Parabolic, Elliptic };
FrameCase frame_case(double mu);

/// Orthonormal frame (xi, X_1..X_n, Y_1..Y_n) and its dual coframe.
struct Frame {
  VectorField xi;
  std::vector<VectorField> x;
  std::vector<VectorField> y;
  KForm eta;
  std::vector<KForm> theta_x;
  std::vector<KForm> theta_y;
};

struct Model {
  ModelSpec spec;
  ChartStructure structure;
  Frame frame;
};

/// phi X_i = Y_i, phi Y_i = -X_i, phi xi = 0, and g declares the frame
/// orthonormal: g = eta^2 + sum (theta_x^2 + theta_y^2), g^{-1} = E E^T.
ChartStructure structure_from_frame(const ChartDecl& chart, const Frame& frame);

Model build_model(const ModelSpec& spec);

/// Frame of the mu model in the frame-case realization on the standard chart.
Frame model_frame(int n, double mu, const ChartDecl& chart);

/// Residuals of [xi, X_i] = X_i - mu/2 Y_i, [xi, Y_i] = mu/2 X_i - Y_i and of
/// every other frame bracket (which vanish).
VerificationReport check_commutators(const Model& model, const Sample& sample, double tol);

/// Largest deviation of the case |mu| < 2 and |mu| > 2 frame components at
/// mu = sign (2 -+ delta) from the |mu| = 2 frame.
struct LimitReport {
  double delta = 0.0;
  double deviation_below = 0.0; // from |mu| = 2 - delta
  double deviation_above = 0.0; // from |mu| = 2 + delta
  double max() const { return std::max(deviation_below, deviation_above); }
};
LimitReport check_limit_at_two(int n, double delta, double sign, const Sample& sample);

/// CR-chart data (a^i, g_{i jbar}) of the global realization.
CRChartData model_cr_data(const ModelSpec& spec);

/// (kappa, mu, nu) the registry assigns to a model, if any.
struct KMNTriple {
  Expr kappa, mu, nu;
};
bool model_kmn(const ModelSpec& spec, KMNTriple& out);

} // namespace accr
