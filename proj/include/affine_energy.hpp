#pragma once

#include "affine_energy/error.hpp"
#include "affine_energy/field.hpp"
#include "affine_energy/prng.hpp"
#include "affine_energy/affine.hpp"
#include "affine_energy/energy.hpp"
#include "affine_energy/exact_ratio.hpp"
#include "affine_energy/projective.hpp"
#include "affine_energy/incidence3d.hpp"
#include "affine_energy/plane.hpp"
#include "affine_energy/richlines.hpp"
#include "affine_energy/generators.hpp"
#include "affine_energy/report.hpp"
#include "affine_energy/io.hpp"
#include "affine_energy/sweep.hpp"
