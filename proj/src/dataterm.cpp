#include "potts/dataterm.hpp"

#include "potts/error.hpp"

namespace potts {

namespace {

void check_inputs(const ScalarImage &f1, const ScalarImage &f2, const VectorField &ubar, std::size_t channels)
{
  if (!f1.same_shape(f2)) {
    throw Error(Errc::ShapeMismatch, "data term: images differ in shape");
  }
  if (!ubar.same_grid(f1) || ubar.channels() != channels) {
    throw Error(Errc::ShapeMismatch, "data term: initializer shape does not match the images");
  }
}

// Gradients are taken on f2 first and then looked up at the shifted
// coordinates.
LinearizedData build(const ScalarImage &f1, const ScalarImage &f2, const VectorField &ubar,
                     std::vector<VectorField> const &gradients, DataMode mode)
{
  ScalarImage const warped = sample_shifted(f2, ubar);
  std::size_t const d = gradients.size();
  LinearizedData data;
  data.mode = mode;
  data.coeffs = VectorField(f1.rows(), f1.cols(), d);
  data.rhs = ScalarImage(f1.rows(), f1.cols());
  for (std::size_t r = 0; r < f1.rows(); ++r) {
    for (std::size_t c = 0; c < f1.cols(); ++c) {
      GridIndex src;
      shifted_source(ubar, r, c, src);
      double rhs = warped(r, c) - f1(r, c);
      for (std::size_t ch = 0; ch < d; ++ch) {
        double const g = gradients[ch](src.row, src.col, 0);
        data.coeffs(r, c, ch) = g;
        rhs += g * ubar(r, c, ch);
      }
      data.rhs(r, c) = rhs;
    }
  }
  return data;
}

} // namespace

LinearizedData build_disparity_data(const ScalarImage &f1, const ScalarImage &f2, const VectorField &ubar)
{
  check_inputs(f1, f2, ubar, 1);
  VectorField const f2_field = as_field(f2);
  return build(f1, f2, ubar, {forward_diff_h(f2_field)}, DataMode::Disparity);
}

LinearizedData build_flow_data(const ScalarImage &f1, const ScalarImage &f2, const VectorField &ubar)
{
  check_inputs(f1, f2, ubar, 2);
  VectorField const f2_field = as_field(f2);
  return build(f1, f2, ubar, {forward_diff_v(f2_field), forward_diff_h(f2_field)}, DataMode::Flow);
}

double data_energy(const LinearizedData &data, const VectorField &u)
{
  if (!u.same_shape(data.coeffs)) {
    throw Error(Errc::ShapeMismatch, "data_energy: field shape does not match the data term");
  }
  double sum = 0.0;
  for (std::size_t r = 0; r < u.rows(); ++r) {
    for (std::size_t c = 0; c < u.cols(); ++c) {
      double residual = -data.rhs(r, c);
      for (std::size_t ch = 0; ch < u.channels(); ++ch) {
        residual += data.coeffs(r, c, ch) * u(r, c, ch);
      }
      sum += residual * residual;
    }
  }
  return 0.5 * sum;
}

} // namespace potts
