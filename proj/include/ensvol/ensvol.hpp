#pragma once

// Umbrella header: the whole library.

#include "ensvol/axioms.hpp"
#include "ensvol/bound_report.hpp"
#include "ensvol/complex_matrix.hpp"
#include "ensvol/dft.hpp"
#include "ensvol/eigen.hpp"
#include "ensvol/ensembles.hpp"
#include "ensvol/errors.hpp"
#include "ensvol/information.hpp"
#include "ensvol/real_matrix.hpp"
#include "ensvol/rng.hpp"
#include "ensvol/semiclassical.hpp"
#include "ensvol/serialize.hpp"
#include "ensvol/symplectic.hpp"
#include "ensvol/tensor.hpp"
#include "ensvol/version.hpp"
#include "ensvol/volume.hpp"
