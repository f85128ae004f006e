int port_of(const struct config *cfg)
{
    const struct server *srv = cfg->server;
    return srv->port;
}
