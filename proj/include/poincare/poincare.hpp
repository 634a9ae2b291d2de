#pragma once

#include "poincare/bounds.hpp"
#include "poincare/charlier.hpp"
#include "poincare/dist_spec.hpp"
#include "poincare/errors.hpp"
#include "poincare/pmf.hpp"
#include "poincare/pmf_io.hpp"
#include "poincare/report_io.hpp"
#include "poincare/spectral.hpp"
#include "poincare/ulc.hpp"
#include "poincare/verify.hpp"
