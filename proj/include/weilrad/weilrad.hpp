#pragma once

#include "weilrad/error.hpp"
#include "weilrad/field.hpp"
#include "weilrad/extension.hpp"
#include "weilrad/algebra.hpp"
#include "weilrad/ideal.hpp"
#include "weilrad/matrix.hpp"
#include "weilrad/unipotent.hpp"
#include "weilrad/invariants.hpp"
#include "weilrad/dense.hpp"
#include "weilrad/experiments.hpp"
