#ifndef JETSPACE_JETSPACE_HPP
#define JETSPACE_JETSPACE_HPP

#include <jetspace/errors.hpp>
#include <jetspace/rational.hpp>
#include <jetspace/multi_index.hpp>
#include <jetspace/laurent_poly.hpp>
#include <jetspace/exact_matrix.hpp>
#include <jetspace/univariate.hpp>
#include <jetspace/smith.hpp>
#include <jetspace/weyl.hpp>
#include <jetspace/jet.hpp>
#include <jetspace/presented_module.hpp>
#include <jetspace/cohomology.hpp>
#include <jetspace/twisted_do.hpp>
#include <jetspace/growth.hpp>
#include <jetspace/symbols.hpp>

#endif
