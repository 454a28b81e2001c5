#pragma once

#include <string>
#include <vector>

#include "fintext/textproc.hpp"

namespace fintext {

enum class LinearKind { majority, ridge, lasso, elastic_net };

// Bag-of-words linear model. Classification reuses the regression solver on
// {0,1} targets with a 0.5 decision threshold.
struct LinearModel {
    LinearKind kind = LinearKind::ridge;
    std::vector<double> weights;  // empty for majority
    double intercept = 0.0;       // modal class for majority
    double lambda = 0.0;
    double l1_ratio = 0.0;
};

// Stores the modal class (tie -> class 1); prediction ignores features.
LinearModel fit_majority(const std::vector<int>& labels);

// (1/2n)||y - Xw - b||^2 + (lambda/2)||w||^2 via cyclic coordinate descent.
LinearModel fit_ridge(const FeatureMatrix& X, const std::vector<double>& y, double lambda,
                      bool fit_intercept = true);

LinearModel fit_lasso(const FeatureMatrix& X, const std::vector<double>& y, double lambda,
                      bool fit_intercept = true);

// (1/2n)||y - Xw - b||^2 + lambda * (rho ||w||_1 + (1-rho)/2 ||w||^2);
// rho=1 is the lasso, rho=0 the ridge. Tolerance 1e-8, at most 1e4 sweeps.
LinearModel fit_elastic_net(const FeatureMatrix& X, const std::vector<double>& y, double lambda,
                            double rho, bool fit_intercept = true);

std::vector<double> predict_linear(const LinearModel& model, const FeatureMatrix& X);

// Decisions at threshold 0.5 over raw scores.
std::vector<int> classify_linear(const LinearModel& model, const FeatureMatrix& X);

std::string linear_model_to_json(const LinearModel& model);
LinearModel linear_model_from_json(const std::string& text);

}  // namespace fintext
