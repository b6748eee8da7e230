#ifndef INTERAX_INTERAX_HPP
#define INTERAX_INTERAX_HPP

#include "cluster.hpp"
#include "common.hpp"
#include "csv.hpp"
#include "dataset.hpp"
#include "info.hpp"
#include "prob.hpp"
#include "report.hpp"
#include "search.hpp"
#include "significance.hpp"
#include "synth.hpp"
#include "version.hpp"
#include "viz.hpp"

#endif
