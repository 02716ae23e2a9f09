#pragma once

namespace kinsir {

/// z / (e^z - 1), with B(0) = 1.
double bernoulli(double z);

/// Chang-Cooper weight delta(lambda) = 1/lambda + 1/(1 - e^lambda); limits 1/2, 0 (+inf), 1 (-inf).
double cc_weight(double lambda);

/// Flux through one face written as a * f_right - b * f_left, for the equation
/// d_t f = d_w (C f + D d_w f). `drift` is the face average of C, `diff` of D, and
/// `lambda` the integral of C/D over the cell (infinite when D vanishes at an end).
struct FaceFlux {
    double a;
    double b;
};
FaceFlux cc_face(double drift, double diff, double lambda, double h);

}  // namespace kinsir
