#pragma once

#include "lemorse/error.hpp"
#include "lemorse/problem.hpp"
#include "lemorse/radial_solver.hpp"
#include "lemorse/spectral_radial.hpp"
#include "lemorse/spectral_angular.hpp"
#include "lemorse/limit_problem.hpp"
#include "lemorse/asymptotics.hpp"
#include "lemorse/oracle.hpp"
#include "lemorse/serialize.hpp"
#include "lemorse/harness.hpp"
