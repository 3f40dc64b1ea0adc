#pragma once

// DSL source forms of the closed-form gallery members, shared by the parser
// round-trip tests and the config-driven CLI checks. The degree-3 Veronese
// sphere is excluded: its coefficients come from quadrature orthonormalization
// and have no fixed source form.

#include <string>
#include <vector>

#include "mwl/immersion.hpp"

namespace testdsl {

struct DslImmersion {
  std::string name;
  int chart_dim;
  mwl::Ambient ambient;
  std::vector<std::string> components;
};

inline std::vector<DslImmersion> gallery_dsl_sources() {
  const std::string r3 = "0.57735026918962573";   // 1/sqrt(3)
  const std::string r2 = "0.70710678118654757";   // 1/sqrt(2)
  const std::string c3 = "0.49999999999999994";   // cos(pi/3)
  const std::string s3 = "0.86602540378443871";   // sin(pi/3)
  std::vector<DslImmersion> out;

  out.push_back({"veronese_s4",
                 2,
                 mwl::Ambient::unit_sphere(4),
                 {
                     "sqrt(3)*sin(u1)*cos(u2)*sin(u1)*sin(u2)",
                     "sqrt(3)*sin(u1)*cos(u2)*cos(u1)",
                     "sqrt(3)*sin(u1)*sin(u2)*cos(u1)",
                     "sqrt(3)/2*((sin(u1)*cos(u2))^2 - (sin(u1)*sin(u2))^2)",
                     "0.5*((sin(u1)*cos(u2))^2 + (sin(u1)*sin(u2))^2 - "
                     "2*cos(u1)^2)",
                 }});

  out.push_back({"clifford_equilateral",
                 2,
                 mwl::Ambient::unit_sphere(5),
                 {
                     r3 + "*cos(u1)",
                     r3 + "*sin(u1)",
                     r3 + "*cos(" + c3 + "*u1 + " + s3 + "*u2)",
                     r3 + "*sin(" + c3 + "*u1 + " + s3 + "*u2)",
                     r3 + "*cos(-" + c3 + "*u1 + " + s3 + "*u2)",
                     r3 + "*sin(-" + c3 + "*u1 + " + s3 + "*u2)",
                 }});

  out.push_back({"clifford_s3",
                 2,
                 mwl::Ambient::unit_sphere(3),
                 {
                     r2 + "*cos(u1)",
                     r2 + "*sin(u1)",
                     r2 + "*cos(u2)",
                     r2 + "*sin(u2)",
                 }});

  out.push_back({"plane",
                 3,
                 mwl::Ambient::euclidean(5),
                 {"u1", "u2", "u3", "0", "0"}});

  // e^{i u1} (1, sqrt(2) z, z^2) / (1+|z|^2) with z = u2 + i u3.
  const std::string den = "(1 + u2^2 + u3^2)";
  const std::string q2 = "1.4142135623730951";  // sqrt(2)
  out.push_back({"hopf_veronese_2",
                 3,
                 mwl::Ambient::unit_sphere(5),
                 {
                     "cos(u1)/" + den,
                     "sin(u1)/" + den,
                     q2 + "*(u2*cos(u1) - u3*sin(u1))/" + den,
                     q2 + "*(u2*sin(u1) + u3*cos(u1))/" + den,
                     "((u2^2 - u3^2)*cos(u1) - 2*u2*u3*sin(u1))/" + den,
                     "((u2^2 - u3^2)*sin(u1) + 2*u2*u3*cos(u1))/" + den,
                 }});

  out.push_back({"cone_clifford_equilateral",
                 3,
                 mwl::Ambient::euclidean(6),
                 {
                     "u1*" + r3 + "*cos(u2)",
                     "u1*" + r3 + "*sin(u2)",
                     "u1*" + r3 + "*cos(" + c3 + "*u2 + " + s3 + "*u3)",
                     "u1*" + r3 + "*sin(" + c3 + "*u2 + " + s3 + "*u3)",
                     "u1*" + r3 + "*cos(-" + c3 + "*u2 + " + s3 + "*u3)",
                     "u1*" + r3 + "*sin(-" + c3 + "*u2 + " + s3 + "*u3)",
                 }});

  return out;
}

}  // namespace testdsl
