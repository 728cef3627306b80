#ifndef RSD_RSD_HPP_
#define RSD_RSD_HPP_

// Umbrella header: exact random-serial-dictatorship probabilities for voting
// and house-allocation profiles, with brute-force and sampling references.

#include "rsd/assignment.hpp"
#include "rsd/errors.hpp"
#include "rsd/generate.hpp"
#include "rsd/io.hpp"
#include "rsd/model.hpp"
#include "rsd/oracle.hpp"
#include "rsd/rational.hpp"
#include "rsd/voting.hpp"

#endif  // RSD_RSD_HPP_
