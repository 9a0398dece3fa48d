#pragma once

#include "mpprl/assignment.hpp"
#include "mpprl/blocking.hpp"
#include "mpprl/bloom.hpp"
#include "mpprl/cluster.hpp"
#include "mpprl/csv.hpp"
#include "mpprl/datagen.hpp"
#include "mpprl/evaluation.hpp"
#include "mpprl/hashing.hpp"
#include "mpprl/protocol.hpp"
#include "mpprl/records.hpp"
#include "mpprl/soundex.hpp"
