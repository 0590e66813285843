#ifndef ZKPCN_ZKPCN_HPP
#define ZKPCN_ZKPCN_HPP

#include "zkpcn/channel.hpp"
#include "zkpcn/experiment.hpp"
#include "zkpcn/hash.hpp"
#include "zkpcn/random.hpp"
#include "zkpcn/routing.hpp"
#include "zkpcn/sim.hpp"
#include "zkpcn/topology.hpp"
#include "zkpcn/types.hpp"
#include "zkpcn/workload.hpp"
#include "zkpcn/zk.hpp"

#endif  // ZKPCN_ZKPCN_HPP
