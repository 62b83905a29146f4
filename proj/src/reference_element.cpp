#include "prismint/reference_element.hpp"

#include <cmath>
#include <string>

#include "prismint/errors.hpp"

namespace prismint {

namespace {

void check_order(int p) {
  if (p < kMinOrder || p > kMaxOrder) {
    throw DomainError("approximation order p=" + std::to_string(p) + " outside supported range [" +
                      std::to_string(kMinOrder) + ", " + std::to_string(kMaxOrder) + "]");
  }
}

}  // namespace

bool inside_reference_prism(const RefCoords& xi, double tol) {
  return xi.xi1 >= -tol && xi.xi2 >= -tol && xi.xi1 + xi.xi2 <= 1.0 + tol &&
         xi.xi3 >= -1.0 - tol && xi.xi3 <= 1.0 + tol;
}

int shape_count(int p) {
  check_order(p);
  return (p + 1) * (p + 1) * (p + 2) / 2;
}

int quadrature_point_count(int p) {
  check_order(p);
  static constexpr int counts[kMaxOrder + 1] = {0, 6, 18, 48, 80, 150, 231, 336};
  return counts[p];
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_1d(int n) {
  if (n < 1) {
    throw DomainError("gauss_legendre_1d requires n >= 1");
  }
  std::vector<double> points(n), weights(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess; the rule
  // is symmetric, so only the lower half is solved for.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = -std::cos(M_PI * (4.0 * i + 3.0) / (4.0 * n + 2.0));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [value, deriv] = legendre_value_and_derivative(n, x);
      dp = deriv;
      const double dx = value / deriv;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        auto [v2, d2] = legendre_value_and_derivative(n, x);
        dp = d2;
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    points[i] = x;
    weights[i] = w;
    points[n - 1 - i] = -x;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    points[n / 2] = 0.0;
  }
  return {std::move(points), std::move(weights)};
}

namespace {

using TriPoints = std::vector<std::array<double, 2>>;

// Orbits of the symmetry group of the triangle, in the (xi1, xi2) coordinates
// with the third barycentric coordinate 1 - xi1 - xi2.
void push_centroid(TriPoints& pts, std::vector<double>& wts, double w) {
  pts.push_back({1.0 / 3.0, 1.0 / 3.0});
  wts.push_back(w);
}

void push_orbit3(TriPoints& pts, std::vector<double>& wts, double a, double w) {
  const double c = 1.0 - 2.0 * a;
  pts.push_back({a, c});
  wts.push_back(w);
  pts.push_back({a, a});
  wts.push_back(w);
  pts.push_back({c, a});
  wts.push_back(w);
}

void push_orbit6(TriPoints& pts, std::vector<double>& wts, double a, double b, double w) {
  const double c = 1.0 - a - b;
  pts.push_back({b, c});
  wts.push_back(w);
  pts.push_back({c, b});
  wts.push_back(w);
  pts.push_back({a, c});
  wts.push_back(w);
  pts.push_back({c, a});
  wts.push_back(w);
  pts.push_back({a, b});
  wts.push_back(w);
  pts.push_back({b, a});
  wts.push_back(w);
}

}  // namespace

std::pair<TriPoints, std::vector<double>> triangle_rule(int poly_degree) {
  TriPoints pts;
  std::vector<double> wts;
  // Symmetric Gauss rules (Dunavant family). Orbit weights below are stated
  // for the unit-area triangle and scaled by the reference area 1/2.
  const double s = 0.5;
  switch (poly_degree) {
    case 2:
      push_orbit3(pts, wts, 1.0 / 6.0, 1.0 / 6.0);
      break;
    case 4:
      push_orbit3(pts, wts, 0.44594849091596488631832925388305, 0.22338158967801146569500700843312 * s);
      push_orbit3(pts, wts, 0.09157621350977074345957146340220, 0.10995174365532186763832632490021 * s);
      break;
    case 6:
      push_orbit3(pts, wts, 0.24928674517091042129163855310702, 0.11678627572637936602528961138558 * s);
      push_orbit3(pts, wts, 0.06308901449150222834033160287082, 0.05084490637020681692093680910686 * s);
      push_orbit6(pts, wts, 0.31035245103378440541660773395655, 0.63650249912139864723014259441205,
                  0.08285107561837357519355345642044 * s);
      break;
    case 8:
      push_centroid(pts, wts, 0.14431560767778716825109111048906 * s);
      push_orbit3(pts, wts, 0.17056930775176020662229350149146, 0.10321737053471825028179155029212 * s);
      push_orbit3(pts, wts, 0.05054722831703097545842355059660, 0.03245849762319808031092592834178 * s);
      push_orbit3(pts, wts, 0.45929258829272315602881551449417, 0.09509163426728462479389610438858 * s);
      push_orbit6(pts, wts, 0.26311282963463811342178578628464, 0.72849239295540428124100037917606,
                  0.02723031417443499426484469007390 * s);
      break;
    case 10:
      push_centroid(pts, wts, 0.090817990382754 * s);
      push_orbit3(pts, wts, 0.485577633383657, 0.036725957756467 * s);
      push_orbit3(pts, wts, 0.109481575485037, 0.045321059435528 * s);
      push_orbit6(pts, wts, 0.141707219414880, 0.307939838764121, 0.072757916845420 * s);
      push_orbit6(pts, wts, 0.025003534762686, 0.246672560639903, 0.028327242531057 * s);
      push_orbit6(pts, wts, 0.009540815400299, 0.066803251012200, 0.009421666963733 * s);
      break;
    case 12:
      push_orbit3(pts, wts, 0.488217389773805, 0.025731066440455 * s);
      push_orbit3(pts, wts, 0.439724392294460, 0.043692544538038 * s);
      push_orbit3(pts, wts, 0.271210385012116, 0.062858224217885 * s);
      push_orbit3(pts, wts, 0.127576145541586, 0.034796112930709 * s);
      push_orbit3(pts, wts, 0.021317350453210, 0.006166261051559 * s);
      push_orbit6(pts, wts, 0.115343494534698, 0.275713269685514, 0.040371557766381 * s);
      push_orbit6(pts, wts, 0.022838332222257, 0.281325580989940, 0.022356773202303 * s);
      push_orbit6(pts, wts, 0.025734050548330, 0.116251915907597, 0.017316231108659 * s);
      break;
    case 14:
      push_orbit3(pts, wts, 0.488963910362179, 0.021883581369429 * s);
      push_orbit3(pts, wts, 0.417644719340454, 0.032788353544125 * s);
      push_orbit3(pts, wts, 0.273477528308839, 0.051774104507292 * s);
      push_orbit3(pts, wts, 0.177205532412543, 0.042162588736993 * s);
      push_orbit3(pts, wts, 0.061799883090873, 0.014433699669777 * s);
      push_orbit3(pts, wts, 0.019390961248701, 0.004923403602400 * s);
      push_orbit6(pts, wts, 0.057124757403648, 0.172266687821356, 0.024665753212564 * s);
      push_orbit6(pts, wts, 0.092916249356972, 0.336861459796345, 0.038571510787061 * s);
      push_orbit6(pts, wts, 0.014646950055654, 0.298372882136258, 0.014436308113534 * s);
      push_orbit6(pts, wts, 0.001268330932872, 0.118974497696957, 0.005010228838501 * s);
      break;
    default:
      throw UnsupportedDegreeError("no symmetric triangle rule for degree " +
                                   std::to_string(poly_degree) + " (supported: 2, 4, ..., 14)");
  }
  return {std::move(pts), std::move(wts)};
}

QuadratureRule prism_quadrature(int p) {
  check_order(p);
  auto [tri_pts, tri_wts] = triangle_rule(2 * p);
  auto [line_pts, line_wts] = gauss_legendre_1d(p + 1);

  QuadratureRule rule;
  rule.order_p = p;
  const std::size_t n = tri_pts.size() * line_pts.size();
  rule.points.reserve(n);
  rule.weights.reserve(n);
  // Triangle index varies fastest; the vertical level is the outer loop.
  for (std::size_t iz = 0; iz < line_pts.size(); ++iz) {
    for (std::size_t it = 0; it < tri_pts.size(); ++it) {
      rule.points.push_back({tri_pts[it][0], tri_pts[it][1], line_pts[iz]});
      rule.weights.push_back(tri_wts[it] * line_wts[iz]);
    }
  }
  return rule;
}

std::vector<TriMonomial> triangle_monomials(int p) {
  check_order(p);
  std::vector<TriMonomial> out;
  out.reserve(static_cast<std::size_t>((p + 1) * (p + 2) / 2));
  for (int d = 0; d <= p; ++d) {
    for (int a = 0; a <= d; ++a) {
      out.push_back({a, d - a});
    }
  }
  return out;
}

std::pair<double, double> legendre_value_and_derivative(int k, double x) {
  if (k == 0) {
    return {1.0, 0.0};
  }
  double pm1 = 1.0;  // P_0
  double p = x;      // P_1
  for (int i = 2; i <= k; ++i) {
    const double pnew = ((2.0 * i - 1.0) * x * p - (i - 1.0) * pm1) / i;
    pm1 = p;
    p = pnew;
  }
  // P_k'(x) = k (x P_k - P_{k-1}) / (x^2 - 1), with the endpoint limit handled
  // by the alternative recurrence form.
  double deriv;
  const double denom = x * x - 1.0;
  if (std::abs(denom) > 1e-10) {
    deriv = k * (x * p - pm1) / denom;
  } else {
    deriv = k * (k + 1.0) / 2.0 * (x > 0 ? 1.0 : (k % 2 == 0 ? -1.0 : 1.0));
  }
  return {p, deriv};
}

ShapePointValues shape_values(int p, const RefCoords& xi) {
  check_order(p);
  if (!inside_reference_prism(xi, 1e-9)) {
    throw DomainError("shape_values: point outside the reference prism");
  }
  const int n_sh = shape_count(p);
  const auto tri = triangle_monomials(p);
  const int n_vert = p + 1;

  // Powers of xi1 and xi2 up to p, with the 0^0 = 1 convention.
  std::vector<double> pow1(p + 1, 1.0), pow2(p + 1, 1.0);
  for (int i = 1; i <= p; ++i) {
    pow1[i] = pow1[i - 1] * xi.xi1;
    pow2[i] = pow2[i - 1] * xi.xi2;
  }
  std::vector<double> leg(n_vert), dleg(n_vert);
  for (int k = 0; k < n_vert; ++k) {
    auto [v, d] = legendre_value_and_derivative(k, xi.xi3);
    leg[k] = v;
    dleg[k] = d;
  }

  ShapePointValues out;
  out.n_shape = n_sh;
  out.data.assign(4u * static_cast<std::size_t>(n_sh), 0.0);
  for (std::size_t it = 0; it < tri.size(); ++it) {
    const int a = tri[it].a;
    const int b = tri[it].b;
    const double m = pow1[a] * pow2[b];
    const double dm1 = a > 0 ? a * pow1[a - 1] * pow2[b] : 0.0;
    const double dm2 = b > 0 ? b * pow1[a] * pow2[b - 1] : 0.0;
    for (int k = 0; k < n_vert; ++k) {
      const int dof = static_cast<int>(it) * n_vert + k;
      out.value(0, dof) = m * leg[k];
      out.value(1, dof) = dm1 * leg[k];
      out.value(2, dof) = dm2 * leg[k];
      out.value(3, dof) = m * dleg[k];
    }
  }
  return out;
}

ShapeTable tabulate_shapes(int p, const QuadratureRule& rule) {
  check_order(p);
  if (rule.order_p != p) {
    throw ConfigError("tabulate_shapes: rule built for p=" + std::to_string(rule.order_p) +
                      ", requested p=" + std::to_string(p));
  }
  ShapeTable table;
  table.order_p = p;
  table.n_shape = shape_count(p);
  table.per_point.reserve(rule.points.size());
  for (const RefCoords& xi : rule.points) {
    table.per_point.push_back(shape_values(p, xi));
  }
  return table;
}

}  // namespace prismint
