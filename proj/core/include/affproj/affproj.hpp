#pragma once

#include "affproj/affine_sets.hpp"
#include "affproj/diagnostics.hpp"
#include "affproj/errors.hpp"
#include "affproj/linalg.hpp"
#include "affproj/mmup.hpp"
#include "affproj/oracle.hpp"
#include "affproj/problem_io.hpp"
#include "affproj/random_family.hpp"
#include "affproj/solver.hpp"
#include "affproj/trace_io.hpp"
