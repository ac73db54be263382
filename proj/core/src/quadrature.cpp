#include "plate/quadrature.hpp"

#include "plate/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace plate {

namespace {

struct Node {
  double x, y, w;
};

// Fully symmetric rules with positive weights and interior points. Orbit
// parameters were solved from the moment equations in 40-digit arithmetic;
// weights include the reference area 1/2.
constexpr Node kDeg1[] = {{1.0 / 3.0, 1.0 / 3.0, 0.5}};

constexpr Node kDeg2[] = {
    {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}};

constexpr Node kDeg4[] = {
    {0.10810301816807022736, 0.44594849091596488632, 0.11169079483900573285},
    {0.44594849091596488632, 0.10810301816807022736, 0.11169079483900573285},
    {0.44594849091596488632, 0.44594849091596488632, 0.11169079483900573285},
    {0.81684757298045851308, 0.09157621350977074346, 0.054975871827660933819},
    {0.09157621350977074346, 0.81684757298045851308, 0.054975871827660933819},
    {0.09157621350977074346, 0.09157621350977074346, 0.054975871827660933819},
};

constexpr Node kDeg5[] = {
    {0.33333333333333333333, 0.33333333333333333333, 0.1125},
    {0.059715871789769820459, 0.47014206410511508977, 0.066197076394253090369},
    {0.47014206410511508977, 0.059715871789769820459, 0.066197076394253090369},
    {0.47014206410511508977, 0.47014206410511508977, 0.066197076394253090369},
    {0.7974269853530873224, 0.1012865073234563388, 0.062969590272413576298},
    {0.1012865073234563388, 0.7974269853530873224, 0.062969590272413576298},
    {0.1012865073234563388, 0.1012865073234563388, 0.062969590272413576298},
};

constexpr Node kDeg6[] = {
    {0.50142650965817915742, 0.24928674517091042129, 0.058393137863189683013},
    {0.24928674517091042129, 0.50142650965817915742, 0.058393137863189683013},
    {0.24928674517091042129, 0.24928674517091042129, 0.058393137863189683013},
    {0.87382197101699554332, 0.06308901449150222834, 0.02542245318510340846},
    {0.06308901449150222834, 0.87382197101699554332, 0.02542245318510340846},
    {0.06308901449150222834, 0.06308901449150222834, 0.02542245318510340846},
    {0.053145049844816947353, 0.31035245103378440542, 0.041425537809186787597},
    {0.31035245103378440542, 0.053145049844816947353, 0.041425537809186787597},
    {0.31035245103378440542, 0.63650249912139864723, 0.041425537809186787597},
    {0.63650249912139864723, 0.31035245103378440542, 0.041425537809186787597},
    {0.053145049844816947353, 0.63650249912139864723, 0.041425537809186787597},
    {0.63650249912139864723, 0.053145049844816947353, 0.041425537809186787597},
};

constexpr Node kDeg8[] = {
    {0.33333333333333333333, 0.33333333333333333333, 0.072157803838893584126},
    {0.081414823414553687942, 0.45929258829272315603, 0.047545817133642312397},
    {0.45929258829272315603, 0.081414823414553687942, 0.047545817133642312397},
    {0.45929258829272315603, 0.45929258829272315603, 0.047545817133642312397},
    {0.65886138449647958676, 0.17056930775176020662, 0.051608685267359125141},
    {0.17056930775176020662, 0.65886138449647958676, 0.051608685267359125141},
    {0.17056930775176020662, 0.17056930775176020662, 0.051608685267359125141},
    {0.89890554336593804908, 0.050547228317030975458, 0.016229248811599040155},
    {0.050547228317030975458, 0.89890554336593804908, 0.016229248811599040155},
    {0.050547228317030975458, 0.050547228317030975458, 0.016229248811599040155},
    {0.0083947774099576053372, 0.26311282963463811342, 0.013615157087217497132},
    {0.26311282963463811342, 0.0083947774099576053372, 0.013615157087217497132},
    {0.26311282963463811342, 0.72849239295540428124, 0.013615157087217497132},
    {0.72849239295540428124, 0.26311282963463811342, 0.013615157087217497132},
    {0.0083947774099576053372, 0.72849239295540428124, 0.013615157087217497132},
    {0.72849239295540428124, 0.0083947774099576053372, 0.013615157087217497132},
};

constexpr Node kDeg10[] = {
    {0.33333333333333333333, 0.33333333333333333333, 0.045408995191376790048},
    {0.028844733232685245265, 0.48557763338365737737, 0.018362978878233352359},
    {0.48557763338365737737, 0.028844733232685245265, 0.018362978878233352359},
    {0.48557763338365737737, 0.48557763338365737737, 0.018362978878233352359},
    {0.78103684902992589041, 0.1094815754850370548, 0.022660529717763967391},
    {0.1094815754850370548, 0.78103684902992589041, 0.022660529717763967391},
    {0.1094815754850370548, 0.1094815754850370548, 0.022660529717763967391},
    {0.14170721941487995476, 0.30793983876412095017, 0.036378958422710054302},
    {0.30793983876412095017, 0.14170721941487995476, 0.036378958422710054302},
    {0.30793983876412095017, 0.55035294182099909508, 0.036378958422710054302},
    {0.55035294182099909508, 0.30793983876412095017, 0.036378958422710054302},
    {0.14170721941487995476, 0.55035294182099909508, 0.036378958422710054302},
    {0.55035294182099909508, 0.14170721941487995476, 0.036378958422710054302},
    {0.025003534762686386074, 0.24667256063990269392, 0.014163621265528742418},
    {0.24667256063990269392, 0.025003534762686386074, 0.014163621265528742418},
    {0.24667256063990269392, 0.72832390459741092001, 0.014163621265528742418},
    {0.72832390459741092001, 0.24667256063990269392, 0.014163621265528742418},
    {0.025003534762686386074, 0.72832390459741092001, 0.014163621265528742418},
    {0.72832390459741092001, 0.025003534762686386074, 0.014163621265528742418},
    {0.0095408154002994575802, 0.066803251012200265774, 0.00471083348186641173},
    {0.066803251012200265774, 0.0095408154002994575802, 0.00471083348186641173},
    {0.066803251012200265774, 0.92365593358750027665, 0.00471083348186641173},
    {0.92365593358750027665, 0.066803251012200265774, 0.00471083348186641173},
    {0.0095408154002994575802, 0.92365593358750027665, 0.00471083348186641173},
    {0.92365593358750027665, 0.0095408154002994575802, 0.00471083348186641173},
};

template <std::size_t N>
QuadratureRule make_rule(const Node (&nodes)[N], int degree) {
  QuadratureRule r;
  r.exactness_degree = degree;
  for (const auto& n : nodes) {
    r.points.emplace_back(n.x, n.y);
    r.weights.push_back(n.w);
  }
  return r;
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw Error("Gauss-Legendre rule needs at least one point");
  QuadratureRule r;
  r.exactness_degree = 2 * n - 1;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.points[n - 1 - i] = Eigen::Vector2d(0.5 * (x + 1.0), 0.0);
    r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

const QuadratureRule& quad_triangle(int degree) {
  static const std::array<QuadratureRule, 6> rules = {
      make_rule(kDeg1, 1), make_rule(kDeg2, 2), make_rule(kDeg4, 4),
      make_rule(kDeg5, 5), make_rule(kDeg6, 6), make_rule(kDeg8, 8)};
  static const QuadratureRule rule10 = make_rule(kDeg10, 10);
  switch (degree) {
    case 1: return rules[0];
    case 2: return rules[1];
    case 3:
    case 4: return rules[2];
    case 5: return rules[3];
    case 6: return rules[4];
    case 7:
    case 8: return rules[5];
    case 9:
    case 10: return rule10;
    default:
      throw Error("unsupported triangle quadrature degree " + std::to_string(degree) +
                  " (supported: 1..10)");
  }
}

const QuadratureRule& quad_edge(int degree) {
  static const std::array<QuadratureRule, 5> rules = {gauss_legendre(1), gauss_legendre(2),
                                                      gauss_legendre(3), gauss_legendre(4),
                                                      gauss_legendre(5)};
  if (degree < 0 || degree > 9)
    throw Error("unsupported edge quadrature degree " + std::to_string(degree) +
                " (supported: 0..9)");
  return rules[degree / 2];
}

}  // namespace plate
