#pragma once

#include <string_view>

namespace mastudy::reference {

/// World Bank GNI-per-capita cut points (USD, Atlas method) by calendar year.
struct ThresholdRow {
    int year;
    double low_max;
    double lower_middle_max;
    double upper_middle_max;
};

inline constexpr ThresholdRow kIncomeThresholds[] = {
    {1995, 765, 3035, 9385},   {1996, 785, 3115, 9645},   {1997, 785, 3125, 9655},
    {1998, 760, 3030, 9360},   {1999, 755, 2995, 9265},   {2000, 755, 2995, 9265},
    {2001, 745, 2975, 9205},   {2002, 735, 2935, 9075},   {2003, 765, 3035, 9385},
    {2004, 825, 3255, 10065},  {2005, 875, 3465, 10725},  {2006, 905, 3595, 11115},
    {2007, 935, 3705, 11455},  {2008, 975, 3855, 11905},  {2009, 995, 3945, 12195},
    {2010, 1005, 3975, 12275}, {2011, 1025, 4035, 12475}, {2012, 1035, 4085, 12615},
    {2013, 1045, 4125, 12745}, {2014, 1045, 4125, 12735}, {2015, 1025, 4035, 12475},
};

inline constexpr int kFirstClassYear = 1995;
inline constexpr int kLastClassYear = 2015;

/// Income class per year 1995..2015, space separated.
struct ClassRow {
    std::string_view nation;
    std::string_view classes;
};

inline constexpr ClassRow kCountryClasses[] = {
    {"Australia", "H H H H H H H H H H H H H H H H H H H H H"},
    {"Canada", "H H H H H H H H H H H H H H H H H H H H H"},
    {"Denmark", "H H H H H H H H H H H H H H H H H H H H H"},
    {"France", "H H H H H H H H H H H H H H H H H H H H H"},
    {"Germany", "H H H H H H H H H H H H H H H H H H H H H"},
    {"Hong Kong SAR, China", "H H H H H H H H H H H H H H H H H H H H H"},
    {"Japan", "H H H H H H H H H H H H H H H H H H H H H"},
    {"Korea, Rep.", "H H H UM H H H H H H H H H H H H H H H H H"},
    // Not in the World Bank grid as bundled; listed as developed in the sample.
    {"Netherlands", "H H H H H H H H H H H H H H H H H H H H H"},
    {"Singapore", "H H H H H H H H H H H H H H H H H H H H H"},
    {"Sweden", "H H H H H H H H H H H H H H H H H H H H H"},
    {"Switzerland", "H H H H H H H H H H H H H H H H H H H H H"},
    {"Taiwan, China", "H H H H H H H H H H H H H H H H H H H H H"},
    {"United Kingdom", "H H H H H H H H H H H H H H H H H H H H H"},
    {"United States", "H H H H H H H H H H H H H H H H H H H H H"},
    {"India", "L L L L L L L L L L L L L L L L L L L L L"},
    {"Indonesia", "LM LM LM L L L L L LM LM LM LM LM LM LM LM LM LM LM LM LM"},
    {"Malaysia", "UM UM UM UM UM UM UM UM UM UM UM UM UM UM UM UM UM UM UM UM UM"},
    {"Myanmar", "L L L L L L L L L L L L L L L L L L L L L"},
    {"Philippines", "LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM"},
    {"Russian Federation", "LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM"},
    {"Thailand", "LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM LM"},
    {"Vietnam", "L L L L L L L L L L L L L L L L L L L L L"},
};

struct NationAlias {
    std::string_view alias; // lower case, punctuation kept
    std::string_view canonical;
};

inline constexpr NationAlias kNationAliases[] = {
    {"australia", "Australia"}, {"au", "Australia"}, {"aus", "Australia"},
    {"canada", "Canada"}, {"ca", "Canada"}, {"can", "Canada"},
    {"denmark", "Denmark"}, {"dk", "Denmark"}, {"dnk", "Denmark"},
    {"france", "France"}, {"fr", "France"}, {"fra", "France"},
    {"germany", "Germany"}, {"de", "Germany"}, {"deu", "Germany"},
    {"hong kong", "Hong Kong SAR, China"}, {"hong kong sar, china", "Hong Kong SAR, China"}, {"hk", "Hong Kong SAR, China"}, {"hkg", "Hong Kong SAR, China"},
    {"japan", "Japan"}, {"jp", "Japan"}, {"jpn", "Japan"},
    {"korea", "Korea, Rep."}, {"korea, rep.", "Korea, Rep."}, {"south korea", "Korea, Rep."}, {"kr", "Korea, Rep."}, {"kor", "Korea, Rep."},
    {"netherlands", "Netherlands"}, {"nl", "Netherlands"}, {"nld", "Netherlands"},
    {"singapore", "Singapore"}, {"sg", "Singapore"}, {"sgp", "Singapore"},
    {"sweden", "Sweden"}, {"se", "Sweden"}, {"swe", "Sweden"},
    {"switzerland", "Switzerland"}, {"ch", "Switzerland"},
    {"taiwan", "Taiwan, China"}, {"taiwan, china", "Taiwan, China"}, {"tw", "Taiwan, China"},
    {"uk", "United Kingdom"}, {"the uk", "United Kingdom"}, {"united kingdom", "United Kingdom"}, {"gb", "United Kingdom"}, {"gbr", "United Kingdom"},
    {"us", "United States"}, {"the us", "United States"}, {"usa", "United States"}, {"united states", "United States"},
    {"india", "India"}, {"indonesia", "Indonesia"}, {"malaysia", "Malaysia"}, {"myanmar", "Myanmar"},
    {"philippines", "Philippines"}, {"russia", "Russian Federation"}, {"rusia", "Russian Federation"},
    {"russian federation", "Russian Federation"}, {"thailand", "Thailand"}, {"th", "Thailand"},
    {"vietnam", "Vietnam"}, {"viet nam", "Vietnam"},
};

} // namespace mastudy::reference
