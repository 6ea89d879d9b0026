from channel.gains import GainTable, ChannelModelError, build_gain_table, link_gain
