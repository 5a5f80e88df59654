#ifndef BERNPOLY_BERNPOLY_HPP
#define BERNPOLY_BERNPOLY_HPP

#include "bernpoly/errors.hpp"
#include "bernpoly/marginal.hpp"
#include "bernpoly/oracle.hpp"
#include "bernpoly/polytope.hpp"
#include "bernpoly/sampler.hpp"
#include "bernpoly/simplex.hpp"
#include "bernpoly/transform.hpp"

#endif  // BERNPOLY_BERNPOLY_HPP
