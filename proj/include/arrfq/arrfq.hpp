#pragma once

#include "arrfq/error.hpp"
#include "arrfq/gf.hpp"
#include "arrfq/cyclotomic.hpp"
#include "arrfq/projplane.hpp"
#include "arrfq/arrangement.hpp"
#include "arrfq/group.hpp"
#include "arrfq/incidence.hpp"
#include "arrfq/search.hpp"
#include "arrfq/constructions.hpp"
#include "arrfq/reflection.hpp"
#include "arrfq/io.hpp"
