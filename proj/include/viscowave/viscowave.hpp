#pragma once

// Umbrella header.

#include "viscowave/bromwich.hpp"
#include "viscowave/causality.hpp"
#include "viscowave/checks.hpp"
#include "viscowave/dispersion.hpp"
#include "viscowave/error.hpp"
#include "viscowave/fit.hpp"
#include "viscowave/green.hpp"
#include "viscowave/io.hpp"
#include "viscowave/law.hpp"
#include "viscowave/measure.hpp"
#include "viscowave/model.hpp"
#include "viscowave/nnls.hpp"
#include "viscowave/parallel.hpp"
#include "viscowave/polynomial.hpp"
#include "viscowave/quadrature.hpp"
#include "viscowave/stable.hpp"
