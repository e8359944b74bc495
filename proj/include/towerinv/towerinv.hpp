#pragma once

#include "towerinv/arith.hpp"
#include "towerinv/characters.hpp"
#include "towerinv/checks.hpp"
#include "towerinv/error.hpp"
#include "towerinv/estimate.hpp"
#include "towerinv/families.hpp"
#include "towerinv/fields.hpp"
#include "towerinv/generators.hpp"
#include "towerinv/io.hpp"
#include "towerinv/lfunc.hpp"
#include "towerinv/real.hpp"
#include "towerinv/reconstruct.hpp"
#include "towerinv/splitting.hpp"
#include "towerinv/suite.hpp"
#include "towerinv/towers.hpp"
