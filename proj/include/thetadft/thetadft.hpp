#pragma once

#include "thetadft/errors.hpp"
#include "thetadft/summation.hpp"
#include "thetadft/residual.hpp"
#include "thetadft/theta.hpp"
#include "thetadft/polyseries.hpp"
#include "thetadft/hermite.hpp"
#include "thetadft/eigenstates.hpp"
#include "thetadft/gram.hpp"
#include "thetadft/twovar.hpp"
#include "thetadft/identities.hpp"
