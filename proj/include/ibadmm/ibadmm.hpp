#ifndef IBADMM_IBADMM_HPP
#define IBADMM_IBADMM_HPP

#include "ibadmm/errors.hpp"
#include "ibadmm/prob.hpp"
#include "ibadmm/objective.hpp"
#include "ibadmm/simplex.hpp"
#include "ibadmm/trace.hpp"
#include "ibadmm/admm.hpp"
#include "ibadmm/ba.hpp"
#include "ibadmm/bayat.hpp"
#include "ibadmm/certificate.hpp"
#include "ibadmm/io.hpp"
#include "ibadmm/harness.hpp"

#endif  // IBADMM_IBADMM_HPP
