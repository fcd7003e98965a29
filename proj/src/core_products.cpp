#include "blab/core_products.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "blab/error.hpp"

namespace blab {
namespace {

constexpr int kRenormEvery = 16;
constexpr double kRenormLow = 0x1p-256;
constexpr double kRenormHigh = 0x1p+256;

std::string describe(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

struct FactorJet {
  Complex value;
  Complex first;
  Complex second;
};

FactorJet factor_jet(const Zero& zero, Complex z) {
  const Complex conj_zn = std::conj(zero.value);
  const Complex conj_u = std::conj(zero.direction);
  Complex den = 1.0 - conj_zn * z;
  if (z == zero.value) {
    // |z_n| may round to 1 for zeros closer to the circle than 2^-53.
    den = zero.one_minus_mod2();
  }
  const Complex value = conj_u * (zero.value - z) / den;
  const Complex first = conj_u * (-zero.one_minus_mod2()) / (den * den);
  const Complex second = 2.0 * conj_zn * first / den;
  return {value, first, second};
}

double max_component(Complex a) { return std::max(std::abs(a.real()), std::abs(a.imag())); }

double compensated_sum(std::span<const Zero> zeros) {
  double sum = 0.0;
  double carry = 0.0;
  for (const Zero& zero : zeros) {
    const double x = zero.deficit;
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

}  // namespace

Zero Zero::from_complex(Complex z) {
  const double modulus = std::abs(z);
  if (!(modulus > 0.0) || !(modulus < 1.0) || !std::isfinite(modulus)) {
    throw InvalidZeroError("zero " + describe(z) + " is not in the punctured open unit disk");
  }
  Zero zero;
  zero.deficit = 1.0 - modulus;
  zero.angle = std::arg(z);
  zero.direction = z / modulus;
  zero.value = z;
  return zero;
}

Zero Zero::from_polar(double deficit, double angle) {
  if (!(deficit > 0.0) || !(deficit < 1.0) || !std::isfinite(angle)) {
    std::ostringstream os;
    os.precision(17);
    os << "polar zero with 1-|z| = " << deficit << ", arg = " << angle
       << " is not in the punctured open unit disk";
    throw InvalidZeroError(os.str());
  }
  Zero zero;
  zero.deficit = deficit;
  zero.angle = angle;
  zero.direction = std::polar(1.0, angle);
  zero.value = (1.0 - deficit) * zero.direction;
  return zero;
}

ZeroSequence::ZeroSequence(std::span<const Complex> zeros) {
  zeros_.reserve(zeros.size());
  for (const Complex z : zeros) {
    zeros_.push_back(Zero::from_complex(z));
  }
  recompute_alpha();
}

ZeroSequence::ZeroSequence(std::vector<Zero> zeros) : zeros_(std::move(zeros)) {
  for (const Zero& zero : zeros_) {
    if (!(zero.deficit > 0.0) || !(zero.deficit < 1.0)) {
      throw InvalidZeroError("zero with deficit outside (0, 1)");
    }
  }
  recompute_alpha();
}

void ZeroSequence::push_back(const Zero& zero) {
  if (!(zero.deficit > 0.0) || !(zero.deficit < 1.0)) {
    throw InvalidZeroError("zero with deficit outside (0, 1)");
  }
  zeros_.push_back(zero);
  recompute_alpha();
}

ZeroSequence ZeroSequence::prefix(std::size_t count) const {
  count = std::min(count, zeros_.size());
  return ZeroSequence(std::vector<Zero>(zeros_.begin(), zeros_.begin() + static_cast<std::ptrdiff_t>(count)));
}

ZeroSequence ZeroSequence::suffix(std::size_t start) const {
  start = std::min(start, zeros_.size());
  return ZeroSequence(std::vector<Zero>(zeros_.begin() + static_cast<std::ptrdiff_t>(start), zeros_.end()));
}

void ZeroSequence::recompute_alpha() { alpha_ = compensated_sum(zeros_); }

Jet ScaledJet::unscaled() const {
  return {std::ldexp(value.real(), exponent) + Complex(0.0, std::ldexp(value.imag(), exponent)),
          std::ldexp(first.real(), exponent) + Complex(0.0, std::ldexp(first.imag(), exponent)),
          std::ldexp(second.real(), exponent) + Complex(0.0, std::ldexp(second.imag(), exponent))};
}

BlaschkeProduct::BlaschkeProduct(ZeroSequence zeros) : zeros_(std::move(zeros)) {}

ScaledJet BlaschkeProduct::scaled_jet(Complex z) const {
  ScaledJet acc{Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0), 0};
  int since_renorm = 0;
  for (const Zero& zero : zeros_) {
    const FactorJet f = factor_jet(zero, z);
    acc.second = acc.second * f.value + 2.0 * acc.first * f.first + acc.value * f.second;
    acc.first = acc.first * f.value + acc.value * f.first;
    acc.value = acc.value * f.value;
    if (++since_renorm == kRenormEvery) {
      since_renorm = 0;
      const double m = std::max({max_component(acc.value), max_component(acc.first), max_component(acc.second)});
      if (m > 0.0 && (m < kRenormLow || m > kRenormHigh)) {
        int e = 0;
        std::frexp(m, &e);
        acc.value = {std::ldexp(acc.value.real(), -e), std::ldexp(acc.value.imag(), -e)};
        acc.first = {std::ldexp(acc.first.real(), -e), std::ldexp(acc.first.imag(), -e)};
        acc.second = {std::ldexp(acc.second.real(), -e), std::ldexp(acc.second.imag(), -e)};
        acc.exponent += e;
      }
    }
  }
  return acc;
}

Complex BlaschkeProduct::operator()(Complex z) const { return jet(z).value; }

double BlaschkeProduct::one_minus_mod2(Complex z) const {
  const double q = 1.0 - std::norm(z);
  if (q <= 0.0) {
    return 0.0;
  }
  double log_product = 0.0;
  for (const Zero& zero : zeros_) {
    const double den = std::norm(1.0 - std::conj(zero.value) * z);
    const double u = z == zero.value ? 1.0 : std::min(1.0, zero.one_minus_mod2() * q / den);
    log_product += std::log1p(-u);
  }
  return -std::expm1(log_product);
}

const RationalForm& BlaschkeProduct::rational() const {
  std::call_once(cache_->once, [this] { cache_->form = build_rational_form(zeros_); });
  return cache_->form;
}

Complex blaschke_factor(DiskPoint z, DiskPoint zn) {
  const Zero zero = Zero::from_complex(zn);
  return factor_jet(zero, z).value;
}

Complex evaluate(const BlaschkeProduct& b, DiskPoint z) { return b(z); }

Complex derivative(const BlaschkeProduct& b, DiskPoint z) {
  if (std::abs(z) > 1.0) {
    throw DomainError("derivative: |z| > 1 at " + describe(z));
  }
  return b.jet(z).first;
}

Complex derivative_fd(const BlaschkeProduct& b, DiskPoint z, double h) {
  if (!(h > 0.0) || !(std::abs(z) + h < 1.0)) {
    throw DomainError("derivative_fd: need h > 0 and |z| + h < 1");
  }
  const Complex ih(0.0, h);
  const Complex along_real = (b(z + h) - b(z - h)) / (2.0 * h);
  const Complex along_imag = (b(z + ih) - b(z - ih)) / (2.0 * ih);
  return 0.5 * (along_real + along_imag);
}

double blaschke_sum(const ZeroSequence& zeros) { return compensated_sum(zeros.zeros()); }

double truncation_tail(const ZeroSequence& tail, DiskPoint z) {
  const double modulus = std::abs(z);
  if (!(modulus < 1.0)) {
    throw DomainError("truncation_tail: bound is unbounded for |z| >= 1");
  }
  return 2.0 * blaschke_sum(tail) / (1.0 - modulus);
}

RationalForm build_rational_form(const ZeroSequence& zeros) {
  if (zeros.empty()) {
    throw DomainError("rational form of a degree-0 product is not defined");
  }
  RationalForm form;
  form.p_coeffs = {Complex(1.0, 0.0)};
  form.q_coeffs = {Complex(1.0, 0.0)};
  for (const Zero& zero : zeros) {
    const Complex p_factor[] = {zero.value, Complex(-1.0, 0.0)};
    const Complex q_factor[] = {Complex(1.0, 0.0), -std::conj(zero.value)};
    form.p_coeffs = multiply(form.p_coeffs, p_factor);
    form.q_coeffs = multiply(form.q_coeffs, q_factor);
    form.unimodular_prefactor *= std::conj(zero.direction);
  }
  return form;
}

}  // namespace blab
