#pragma once

#include "fjpop/bounds.hpp"
#include "fjpop/certify.hpp"
#include "fjpop/fjkkt.hpp"
#include "fjpop/hierarchy.hpp"
#include "fjpop/homogenize.hpp"
#include "fjpop/io.hpp"
#include "fjpop/nnls.hpp"
#include "fjpop/numeric.hpp"
#include "fjpop/polynomial.hpp"
#include "fjpop/polytext.hpp"
#include "fjpop/pop.hpp"
#include "fjpop/relax.hpp"
#include "fjpop/sdp.hpp"
#include "fjpop/sdpa.hpp"
